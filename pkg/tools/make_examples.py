"""Regenerate the bundled example documents in canonical form.

Run from the repository root:  python tools/make_examples.py
"""

import json
import pathlib

from ftcad.io import parse_graph_document, serialize_graph_document

DATA = pathlib.Path(__file__).resolve().parent.parent / "src" / "ftcad" / "data"


def emit(name: str, doc: dict) -> None:
    text = serialize_graph_document(parse_graph_document(json.dumps(doc)))
    (DATA / name).write_text(text, encoding="utf-8")
    print(name, len(text), "bytes")


def node(category, key, name=None, rel=None, lam=None, pe_id=None, k=None, loc=None, text=None):
    record = {"category": category, "key": key}
    if loc:
        record["loc"] = loc
    if name is not None:
        record["name"] = name
    if text is not None:
        record["text"] = text
    if rel is not None:
        record["Rel"] = rel
    if lam is not None:
        record["lambdaHw"] = lam
    if pe_id is not None:
        record["id"] = pe_id
    if k is not None:
        record["k"] = k
    return record


def link(a, b):
    return {"from": a, "to": b, "fromPort": "out", "toPort": "in"}


# --- serial: the five-element chain with a caption label -------------------

serial = {
    "class": "go.GraphLinksModel",
    "nodeDataArray": [
        node("sensor", "sensor 1", "sen1", rel=0.9999, loc="-790.6837592529297 -478.21550625"),
        node("Module", "Module 1", "Mod1", rel=0.9990, loc="-668.1232749323846 -498.7627312620751"),
        node("DV", "DV 1", "DV1", rel=0.9991, loc="-551.4346749323846 -467.15956256761564"),
        node("actuator", "Actuator 1", "Act1", rel=0.99996, loc="-279.16127493238446 -478.0991188176156"),
        node("Module", "Module 3", "Mod2", rel=0.9990, loc="-433.53056868238446 -498.762731262075"),
        node("label", "label", text="Serial Reliability Of a Basic System", loc="-593.9773936823844 -331.428036727202"),
    ],
    "linkDataArray": [
        link("sensor 1", "Module 1"),
        link("Module 1", "DV 1"),
        link("DV 1", "Module 3"),
        link("Module 3", "Actuator 1"),
    ],
}

# --- parallel2: two sensor branches joined before a shared module ----------

parallel2 = {
    "nodeDataArray": [
        node("sensor", "sensorOne", "sensorOne", lam=1, loc="-800 -520"),
        node("Module", "FirstModule", "FirstModule", lam=1, pe_id="0x1", loc="-660 -520"),
        node("DV", "FirstDataVariable", "FirstDataVariable", lam=1, loc="-520 -520"),
        node("sensor", "sensorTwo", "sensorTwo", lam=1, loc="-800 -380"),
        node("Module", "SecondModule", "SecondModule", lam=1, pe_id="0x2", loc="-660 -380"),
        node("DV", "SecondDataVariable", "SecondDataVariable", lam=1, loc="-520 -380"),
        node("OR", "or1", "eitherBranch", k=1, loc="-400 -450"),
        node("Module", "ThirdModule", "ThirdModule", lam=1, pe_id="0x4", loc="-280 -450"),
        node("actuator", "Output", "Output", lam=1, loc="-160 -450"),
    ],
    "linkDataArray": [
        link("sensorOne", "FirstModule"),
        link("FirstModule", "FirstDataVariable"),
        link("FirstDataVariable", "or1"),
        link("sensorTwo", "SecondModule"),
        link("SecondModule", "SecondDataVariable"),
        link("SecondDataVariable", "or1"),
        link("or1", "ThirdModule"),
        link("ThirdModule", "Output"),
    ],
}

# --- triple: three redundant door branches behind a voter ------------------

triple_nodes = []
triple_links = []
for i, pid in ((1, "0x1"), (2, "0x2"), (3, "0x4")):
    y = -560 + 140 * (i - 1)
    triple_nodes += [
        node("sensor", f"Door{i}", f"Door{i}", lam=1, loc=f"-800 {y}"),
        node("Module", f"Door{i}Drv", f"Door{i}Drv", lam=1, pe_id=pid, loc=f"-660 {y}"),
        node("DV", f"Door{i}Pos", f"Door{i}Pos", lam=1, loc=f"-520 {y}"),
    ]
    triple_links += [
        link(f"Door{i}", f"Door{i}Drv"),
        link(f"Door{i}Drv", f"Door{i}Pos"),
        link(f"Door{i}Pos", "or1"),
    ]
triple_nodes += [
    node("OR", "or1", "anyDoor", k=1, loc="-400 -420"),
    node("Module", "Voter", "Voter", lam=1, pe_id="0x8", loc="-280 -420"),
    node("actuator", "Alarm", "Alarm", lam=1, loc="-160 -420"),
]
triple_links += [link("or1", "Voter"), link("Voter", "Alarm")]
triple = {"nodeDataArray": triple_nodes, "linkDataArray": triple_links}

# --- abs: the anti-lock braking case study ---------------------------------
# Four braking pipelines: rear wheel pair, rear+front through the combined
# differential estimator, rear differential sensor + front pair through the
# same estimator, and the front wheel pair, each gated by the brake pedal.

ORDERED_PES = (
    ("RR_Speed_Est", "0x1"),
    ("RL_Speed_Est", "0x2"),
    ("RD_Speed_Est", "0x4"),
    ("FR_Speed_Est", "0x8"),
    ("FL_Speed_Est", "0x10"),
    ("Brake_Padel_Drv", "0x20"),
    ("R_Speed_Diff_Est", "0x80"),
    ("F_Speed_Diff_Est", "0x100"),
    ("R_F_Diff_Est", "0x200"),
    ("ABS_Control_Drv", "0x800"),
)
PE_ID = dict(ORDERED_PES)

abs_nodes = [
    node("sensor", "RR_Speed_Sensor", "RR_Speed_Sensor", lam=1, loc="-980 -700"),
    node("Module", "RR_Speed_Est", "RR_Speed_Est", lam=1, pe_id=PE_ID["RR_Speed_Est"], loc="-860 -700"),
    node("DV", "RR_Speed", "RR_Speed", lam=1, loc="-740 -700"),
    node("sensor", "RL_Speed_Sensor", "RL_Speed_Sensor", lam=1, loc="-980 -620"),
    node("Module", "RL_Speed_Est", "RL_Speed_Est", lam=1, pe_id=PE_ID["RL_Speed_Est"], loc="-860 -620"),
    node("DV", "RL_Speed", "RL_Speed", lam=1, loc="-740 -620"),
    node("AND", "and_rear", "rearPair", loc="-640 -660"),
    node("Module", "R_Speed_Diff_Est", "R_Speed_Diff_Est", lam=1, pe_id=PE_ID["R_Speed_Diff_Est"], loc="-540 -660"),
    node("DV", "R_Speed_Diff", "R_Speed_Diff", lam=1, loc="-440 -660"),
    node("sensor", "RD_Speed_Sensor", "RD_Speed_Sensor", lam=1, loc="-980 -540"),
    node("Module", "RD_Speed_Est", "RD_Speed_Est", lam=1, pe_id=PE_ID["RD_Speed_Est"], loc="-860 -540"),
    node("DV", "RD_Speed", "RD_Speed", lam=1, loc="-740 -540"),
    node("sensor", "FR_Speed_Sensor", "FR_Speed_Sensor", lam=1, loc="-980 -460"),
    node("Module", "FR_Speed_Est", "FR_Speed_Est", lam=1, pe_id=PE_ID["FR_Speed_Est"], loc="-860 -460"),
    node("DV", "FR_Speed", "FR_Speed", lam=1, loc="-740 -460"),
    node("sensor", "FL_Speed_Sensor", "FL_Speed_Sensor", lam=1, loc="-980 -380"),
    node("Module", "FL_Speed_Est", "FL_Speed_Est", lam=1, pe_id=PE_ID["FL_Speed_Est"], loc="-860 -380"),
    node("DV", "FL_Speed", "FL_Speed", lam=1, loc="-740 -380"),
    node("AND", "and_front", "frontPair", loc="-640 -420"),
    node("Module", "F_Speed_Diff_Est", "F_Speed_Diff_Est", lam=1, pe_id=PE_ID["F_Speed_Diff_Est"], loc="-540 -420"),
    node("DV", "F_Speed_Diff", "F_Speed_Diff", lam=1, loc="-440 -420"),
    node("OR", "or_rear_diff", "rearOrDiff", k=1, loc="-360 -580"),
    node("AND", "and_rf", "rearAndFront", loc="-300 -520"),
    node("Module", "R_F_Diff_Est", "R_F_Diff_Est", lam=1, pe_id=PE_ID["R_F_Diff_Est"], loc="-240 -520"),
    node("DV", "R_F_Diff", "R_F_Diff", lam=1, loc="-180 -520"),
    node("OR", "or_main", "anySpeedDiff", k=1, loc="-120 -520"),
    node("sensor", "Brake_Padel", "Brake_Padel", lam=1, loc="-980 -260"),
    node("Module", "Brake_Padel_Drv", "Brake_Padel_Drv", lam=1, pe_id=PE_ID["Brake_Padel_Drv"], loc="-860 -260"),
    node("DV", "Brake_Padel_Pos", "Brake_Padel_Pos", lam=1, loc="-740 -260"),
    node("AND", "and_main", "speedAndBrake", loc="-60 -420"),
    node("Module", "ABS_Control_Drv", "ABS_Control_Drv", lam=1, pe_id=PE_ID["ABS_Control_Drv"], loc="0 -420"),
    node("DV", "ABS_Control", "ABS_Control", lam=1, loc="60 -420"),
    node("actuator", "Valves", "Valves", lam=1, loc="120 -420"),
]
abs_links = [
    link("RR_Speed_Sensor", "RR_Speed_Est"),
    link("RR_Speed_Est", "RR_Speed"),
    link("RR_Speed", "and_rear"),
    link("RL_Speed_Sensor", "RL_Speed_Est"),
    link("RL_Speed_Est", "RL_Speed"),
    link("RL_Speed", "and_rear"),
    link("and_rear", "R_Speed_Diff_Est"),
    link("R_Speed_Diff_Est", "R_Speed_Diff"),
    link("RD_Speed_Sensor", "RD_Speed_Est"),
    link("RD_Speed_Est", "RD_Speed"),
    link("FR_Speed_Sensor", "FR_Speed_Est"),
    link("FR_Speed_Est", "FR_Speed"),
    link("FR_Speed", "and_front"),
    link("FL_Speed_Sensor", "FL_Speed_Est"),
    link("FL_Speed_Est", "FL_Speed"),
    link("FL_Speed", "and_front"),
    link("and_front", "F_Speed_Diff_Est"),
    link("F_Speed_Diff_Est", "F_Speed_Diff"),
    link("R_Speed_Diff", "or_rear_diff"),
    link("RD_Speed", "or_rear_diff"),
    link("or_rear_diff", "and_rf"),
    link("F_Speed_Diff", "and_rf"),
    link("and_rf", "R_F_Diff_Est"),
    link("R_F_Diff_Est", "R_F_Diff"),
    link("R_Speed_Diff", "or_main"),
    link("R_F_Diff", "or_main"),
    link("F_Speed_Diff", "or_main"),
    link("or_main", "and_main"),
    link("Brake_Padel", "Brake_Padel_Drv"),
    link("Brake_Padel_Drv", "Brake_Padel_Pos"),
    link("Brake_Padel_Pos", "and_main"),
    link("and_main", "ABS_Control_Drv"),
    link("ABS_Control_Drv", "ABS_Control"),
    link("ABS_Control", "Valves"),
]
abs_doc = {"nodeDataArray": abs_nodes, "linkDataArray": abs_links}

# --- degradation scenario on the braking example ---------------------------
# One tick is 100 hours, so tick 400 sits at 0.04 million hours. The event
# order mirrors the published degradation study: the first path fails, the
# differential estimator is damaged, the first path comes back, fails again,
# then a front wheel estimator dies.

fig37 = {
    "duration": 1200,
    "tick_hours": 100.0,
    "hello_period": 10,
    "aging_timeout": 30,
    "events": [
        {"tick": 400, "node": "RR_Speed_Est", "action": "fail_silent"},
        {"tick": 500, "node": "RD_Speed_Est", "action": "fail_silent"},
        {"tick": 650, "node": "RR_Speed_Est", "action": "repair"},
        {"tick": 800, "node": "RR_Speed_Est", "action": "fail_silent"},
        {"tick": 1000, "node": "FR_Speed_Est", "action": "fail_silent"},
    ],
}


def main():
    DATA.mkdir(parents=True, exist_ok=True)
    emit("serial.json", serial)
    emit("parallel2.json", parallel2)
    emit("triple.json", triple)
    emit("abs.json", abs_doc)
    (DATA / "abs_fig37_scenario.json").write_text(json.dumps(fig37, indent=2) + "\n", encoding="utf-8")
    print("abs_fig37_scenario.json written")


if __name__ == "__main__":
    main()
