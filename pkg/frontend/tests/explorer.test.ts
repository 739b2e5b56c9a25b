import { beforeEach, describe, expect, it } from "vitest";

import { ReliabilityExplorer, parseCurvesCsv } from "../src/explorer.js";
import type { GraphDocument, RankingPayload } from "../src/types.js";
import { MockService, fixture, fixtureText } from "./mock_service.js";

const triple = () => fixture<GraphDocument>("triple.json");

describe("curve csv parsing", () => {
  it("splits the service csv into grid and columns", () => {
    const curves = parseCurvesCsv(fixtureText("triple_curves.csv"));
    expect(curves.names).toEqual(["r_pipeline_1_0x9", "r_pipeline_2_0xA", "r_pipeline_3_0xC"]);
    expect(curves.grid[0]).toBe(0);
    expect(curves.grid[curves.grid.length - 1]).toBe(200_000);
    expect(curves.columns).toHaveLength(3);
    expect(curves.columns[0][0]).toBe(1.0);
  });
});

describe("exploration", () => {
  let explorer: ReliabilityExplorer;

  beforeEach(async () => {
    explorer = new ReliabilityExplorer(new MockService());
    await explorer.explore(triple(), 200_000, 9);
  });

  it("lists one entry per ranked pipeline (three for the voter example)", () => {
    expect(explorer.rows).toHaveLength(3);
    const html = explorer.renderListHtml();
    expect(html.match(/rank-entry/g)).toHaveLength(3);
    expect(html).toContain("0x9");
    expect(html).toContain("0xA");
    expect(html).toContain("0xC");
  });

  it("selecting a pipeline reveals its member sequence", () => {
    explorer.select(2);
    const detail = explorer.renderDetailHtml();
    const row = fixture<RankingPayload>("triple_rank.json").ranking[1];
    for (const key of row.sequence) expect(detail).toContain(key);
  });

  it("hover readout at t=0 reads R=1.0 straight from the samples", () => {
    const sample = explorer.readoutAt(0);
    expect(sample).toEqual({ t: 0, r: 1.0 });
  });

  it("readout snaps to the nearest service sample, never interpolating", () => {
    const curves = explorer.curves!;
    const stride = curves.grid[1];
    const sample = explorer.readoutAt(stride * 1.4);
    expect(sample!.t).toBe(stride);
    expect(sample!.r).toBe(curves.columns[0][1]);
  });

  it("every displayed figure equals the service payload verbatim", () => {
    const payload = fixture<RankingPayload>("triple_rank.json");
    const html = explorer.renderListHtml();
    for (const row of payload.ranking) {
      expect(html).toContain(row.r_at_ref.toFixed(6));
    }
  });

  it("draws one polyline per pipeline with the selected one marked", () => {
    const svg = explorer.renderCurvesSvg();
    expect(svg.match(/<polyline/g)).toHaveLength(3);
    expect(svg).toContain("selected");
  });
});
