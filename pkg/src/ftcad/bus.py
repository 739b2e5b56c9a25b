"""CAN-style broadcast bus simulation.

Standard-format identifiers are 11 bits (0-2047) and lower identifiers
win arbitration (CSMA/AMP). The address space is partitioned into
categories of four 32-address subranges each; 896-2047 is unallocated
for expansion. The bus itself is slotted: one winning frame is delivered
per simulation tick and losers stay queued for the next slot, which
abstracts bit-level arbitration while keeping the priority outcome
faithful.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .errors import IdCollisionError, OutOfRangeError, UnknownMnemonicError

#: identifiers fit in 11 bits: 2048 different addresses
MAX_ID = 2047

#: broadcast identifier used for manager-to-all configuration frames
MANAGER_TO_ALL_ID = 0x40

#: base identifier for PE hello frames (hardware PE to manager subrange);
#: the PE's bit index is added, and the subrange is 32 wide so every
#: possible one-hot ID fits
HELLO_BASE_ID = 0x180


class AddressCategory(enum.Enum):
    EMERGENCY = "Emergency"
    MANAGER = "Manager"
    SOFTWARE_PE = "SoftwarePE"
    HARDWARE_PE = "HardwarePE"
    ACTUATOR = "Actuator"
    BLOCK1 = "Block1"
    BLOCK2 = "Block2"
    UNALLOCATED = "Unallocated"


@dataclass(frozen=True)
class AddressRange:
    """One row of the address-space map: an inclusive identifier interval
    with its category and subcategory description (blank where the map
    reserves the range without naming it)."""

    category: AddressCategory
    lo: int
    hi: int
    description: str

    def __contains__(self, ident: int) -> bool:
        return self.lo <= ident <= self.hi


ADDRESS_MAP: tuple[AddressRange, ...] = (
    AddressRange(AddressCategory.EMERGENCY, 0, 31, ""),
    AddressRange(AddressCategory.EMERGENCY, 32, 63, ""),
    AddressRange(AddressCategory.EMERGENCY, 64, 95, "MANAGER TO ALL"),
    AddressRange(AddressCategory.EMERGENCY, 96, 127, ""),
    AddressRange(AddressCategory.MANAGER, 128, 159, "Hardware PE to Manager"),
    AddressRange(AddressCategory.MANAGER, 160, 191, "Manager PE to Actuators"),
    AddressRange(AddressCategory.MANAGER, 192, 223, "Manager PE to Software PE"),
    AddressRange(AddressCategory.MANAGER, 224, 255, "Manager Hardware PE"),
    AddressRange(AddressCategory.SOFTWARE_PE, 256, 287, "SW PE to Manager"),
    AddressRange(AddressCategory.SOFTWARE_PE, 288, 319, "SW PE to Actuators"),
    AddressRange(AddressCategory.SOFTWARE_PE, 320, 351, "SW PE to Software PE"),
    AddressRange(AddressCategory.SOFTWARE_PE, 352, 383, "SW PE to Hardware PE"),
    AddressRange(AddressCategory.HARDWARE_PE, 384, 415, "Hardware PE to Manager"),
    AddressRange(AddressCategory.HARDWARE_PE, 416, 447, "Hardware PE to Actuators"),
    AddressRange(AddressCategory.HARDWARE_PE, 448, 479, "Hardware PE to Software PE"),
    AddressRange(AddressCategory.HARDWARE_PE, 480, 511, "Hardware PE to Hardware PE"),
    AddressRange(AddressCategory.ACTUATOR, 512, 543, "Actuator to Manager"),
    AddressRange(AddressCategory.ACTUATOR, 544, 575, ""),
    AddressRange(AddressCategory.ACTUATOR, 576, 607, ""),
    AddressRange(AddressCategory.ACTUATOR, 608, 639, ""),
    AddressRange(AddressCategory.BLOCK1, 640, 671, ""),
    AddressRange(AddressCategory.BLOCK1, 672, 703, ""),
    AddressRange(AddressCategory.BLOCK1, 704, 735, ""),
    AddressRange(AddressCategory.BLOCK1, 736, 767, ""),
    AddressRange(AddressCategory.BLOCK2, 768, 799, ""),
    AddressRange(AddressCategory.BLOCK2, 800, 831, ""),
    AddressRange(AddressCategory.BLOCK2, 832, 863, ""),
    AddressRange(AddressCategory.BLOCK2, 864, 895, ""),
    AddressRange(AddressCategory.UNALLOCATED, 896, 2047, "Unallocated for system expansion"),
)

#: message identifiers of the anti-lock braking case study
ABS_IDENTIFIERS: dict[str, int] = {
    "ManagerToRR_Speed_Est": 0xE0,
    "ManagerToRL_Speed_Est": 0xE1,
    "ManagerToR_Speed_Diff_Est": 0xC0,
    "ManagerToRD_Speed_Est": 0xE2,
    "ManagerToR_F_Diff_Est": 0xC1,
    "ManagerToFR_Speed_Est": 0xE3,
    "ManagerToFL_Speed_Est": 0xE4,
    "ManagerToF_Speed_Diff_Est": 0xC2,
    "ManagerToBrake_Padel_Drv": 0xE5,
    "ManagerToABS_Control_Drv": 0xC3,
    "ManagerToAccel_Padel_Drv": 0xE6,
    "ManagerToTCS_Control_Drv": 0xC4,
    "ManagerToValves": 0xA0,
    "RR_Speed_EstToManager": 0x180,
    "RR_Speed_EstToR_Speed_Diff_Est": 0x1C0,
    "RL_Speed_EstToManager": 0x181,
    "RL_Speed_EstToR_Speed_Diff_Est": 0x1C1,
    "R_Speed_Diff_EstToManager": 0x100,
    "R_Speed_Diff_EstToR_F_Diff_Est": 0x140,
    "RD_Speed_EstToManager": 0x182,
    "RD_Speed_EstToR_F_Diff_Est": 0x141,
    "R_F_Diff_EstToManager": 0x101,
    "R_F_Diff_EstToABS_Control_Drv": 0x142,
    "FR_Speed_EstToManager": 0x183,
    "FR_Speed_EstToF_Speed_Diff_Est": 0x1C2,
    "FL_Speed_EstToManager": 0x184,
    "FL_Speed_EstToF_Speed_Diff_Est": 0x1C3,
    "F_Speed_Diff_EstToManager": 0x102,
    "F_Speed_Diff_EstToABS_Control_Drv": 0x143,
    "F_Speed_Diff_EstToTCS_Control_Drv": 0x144,
    "Brake_Padel_DrvToManager": 0x185,
    "Brake_Padel_DrvToABS_Control_Drv": 0xFA,
    "ABS_Control_DrvToManager": 0x103,
    "ABS_Control_DrvToActuator": 0x120,
    "Accel_Padel_DrvToManager": 0x186,
    "Accel_Padel_DrvToABS_Control_Drv": 0x1C4,
    "Accel_Padel_DrvToTCS_Control_Drv": 0x122,
    "TCS_Control_DrvToManager": 0x104,
    "TCS_Control_DrvToValve": 0x121,
    "ValvesToManager": 0x200,
    "R_Speed_Diff_EstToABS_Control_Drv": 0x145,
    "F_Speed_Diff_EstToR_F_Diff_Est": 0x146,
    "TCS_Control_DrvToABS_Control_Drv": 0x147,
}

#: three case-study identifiers sit outside the address block their
#: endpoints belong to; they are modelled as published, not repaired
IRREGULAR_IDENTIFIERS = frozenset(
    {
        "RD_Speed_EstToR_F_Diff_Est",
        "Brake_Padel_DrvToABS_Control_Drv",
        "Accel_Padel_DrvToTCS_Control_Drv",
    }
)


@dataclass(frozen=True)
class CanFrame:
    """One message: 11-bit id, up to 8 data bytes, plus simulation
    bookkeeping (sender key and the tick it was offered to the bus)."""

    can_id: int
    payload: bytes = b""
    sender: str = ""
    timestamp: int = 0

    def __post_init__(self):
        if not (0 <= self.can_id <= MAX_ID):
            raise OutOfRangeError(f"identifier {self.can_id:#x} outside 11-bit space")
        if len(self.payload) > 8:
            raise ValueError(f"payload of {len(self.payload)} bytes exceeds 8")

    @property
    def dlc(self) -> int:
        return len(self.payload)


def mask_payload(mask: int) -> bytes:
    """Serialize a 32-bit mask as 4 big-endian payload bytes."""
    return mask.to_bytes(4, "big")


def payload_mask(payload: bytes) -> int:
    return int.from_bytes(payload, "big")


def classify_address(ident: int) -> AddressRange:
    """The unique map row containing ``ident``; total on 0-2047."""
    if not (0 <= ident <= MAX_ID):
        raise OutOfRangeError(f"identifier {ident} outside 0-{MAX_ID}")
    for row in ADDRESS_MAP:
        if ident in row:
            return row
    raise AssertionError("address map does not partition the space")


def abs_identifier(mnemonic: str) -> int:
    try:
        return ABS_IDENTIFIERS[mnemonic]
    except KeyError:
        raise UnknownMnemonicError(f"unknown message mnemonic {mnemonic!r}") from None


def mnemonic_direction(mnemonic: str) -> str:
    """Direction of a message relative to the manager: ``to-manager``,
    ``from-manager`` or ``peer`` (PE/actuator traffic)."""
    if mnemonic.endswith("ToManager"):
        return "to-manager"
    if mnemonic.startswith("ManagerTo"):
        return "from-manager"
    return "peer"


def direction_consistent(mnemonic: str, ident: int) -> bool:
    """Whether an identifier sits in a subrange matching its mnemonic's
    manager-relative direction. Peer traffic has no manager direction and
    only needs an allocated subrange."""
    row = classify_address(ident)
    direction = mnemonic_direction(mnemonic)
    if direction == "to-manager":
        return row.description.endswith("to Manager")
    if direction == "from-manager":
        return row.description.upper().startswith("MANAGER")
    return row.category is not AddressCategory.UNALLOCATED


def arbitrate(contenders) -> CanFrame:
    """CSMA/AMP outcome: the lowest identifier wins the slot."""
    contenders = list(contenders)
    if not contenders:
        raise ValueError("no contenders")
    ids = [f.can_id for f in contenders]
    if len(set(ids)) != len(ids):
        dup = next(i for i in ids if ids.count(i) > 1)
        raise IdCollisionError(f"two contenders share identifier {dup:#x}")
    return min(contenders, key=lambda f: f.can_id)


@dataclass
class Bus:
    """Slotted broadcast bus: callers enqueue frames at any time, one
    winner is delivered per tick and every endpoint sees it; losers stay
    queued. The delivery log doubles as the exportable frame trace."""

    pending: list[CanFrame] = field(default_factory=list)
    delivered: list[tuple[int, CanFrame]] = field(default_factory=list)

    def send(self, frame: CanFrame) -> None:
        self.pending.append(frame)

    def replace(self, frame: CanFrame) -> None:
        """Send, superseding any still-queued frame with the same id from
        the same sender (periodic senders keep only their newest frame)."""
        self.pending = [
            f for f in self.pending if not (f.can_id == frame.can_id and f.sender == frame.sender)
        ]
        self.pending.append(frame)

    def step(self, tick: int) -> CanFrame | None:
        """Arbitrate the current slot; returns the delivered frame."""
        if not self.pending:
            return None
        winner = arbitrate(self.pending)
        self.pending.remove(winner)
        self.delivered.append((tick, winner))
        return winner

    def log_csv(self) -> str:
        lines = ["tick,id_hex,sender,dlc,payload_hex"]
        for tick, frame in self.delivered:
            lines.append(
                f"{tick},0x{frame.can_id:X},{frame.sender},{frame.dlc},{frame.payload.hex()}"
            )
        return "\n".join(lines) + "\n"
