"""Parsimonious bucket construction for the piece sets {I,T,L} and {I,T,J}.

Input is a Numerical-3DM instance.  Its integers are first rescaled with the
same mod-8 offsets used by the chain's last step (8a+1 / 8b+2 / 8c-3, target
8t) so that any triple reaching the target takes one element from each set.

Each bucket is a 3-wide well of (T,L,T) units, pre-filled to the a-value of
its triple slot; the numbers b and c arrive as piece runs (I, (T,L,T)^(m-1),
T, T) and deposit m-1 units into the primed bucket, so a bucket closes flush
exactly when a+b+c equals the target.  The leading I of every number and the
trailing T pairs go to dedicated side wells, as does the finale (L, I^N);
N is the smallest multiple of four exceeding the bucket height.
"""

from __future__ import annotations

from ..chain import N3DMInstance
from ..engine import GravityMode, PieceState
from ..model import (
    Blowup,
    Instance,
    Objective,
    PieceSequence,
    ReductionMeta,
    mirror_instance,
)
from ..pieces import MIRROR_ORIENT, MIRROR_PIECE, PieceType
from .base import GridPainter, InvalidInstance, Player
from .tower import _mirror_state

P = PieceType

PIECESETS = ("ITL", "ITJ")


def rescale(inst: N3DMInstance) -> tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...], int]:
    a = tuple(8 * v + 1 for v in inst.a)
    b = tuple(8 * v + 2 for v in inst.b)
    c = tuple(8 * v - 3 for v in inst.c)
    return a, b, c, 8 * inst.t


def number_segments(m: int) -> list[tuple[PieceType, int]]:
    if m < 2:
        raise InvalidInstance("encoded integers must be at least 2 after rescaling")
    out = [(P.I, 1)]
    for _ in range(m - 1):
        out += [(P.T, 1), (P.L, 1), (P.T, 1)]
    out += [(P.T, 2)]
    return out


def finale_length(bucket_height: int) -> int:
    # smallest multiple of 4 strictly above the bucket height
    return (bucket_height // 4 + 1) * 4


def build_sequence(inst: N3DMInstance) -> tuple[PieceSequence, int]:
    _, b, c, t = rescale(inst)
    bucket_height = 4 * (t - 2)
    n_finale = finale_length(bucket_height)
    segs: list[tuple[PieceType, int]] = []
    for value in b:
        segs += number_segments(value)
    for value in c:
        segs += number_segments(value)
    segs += [(P.L, 1), (P.I, n_finale)]
    return PieceSequence.from_segments(segs), n_finale


def _geometry(inst: N3DMInstance):
    a, b, c, t = rescale(inst)
    n = inst.n
    bucket_h = 4 * (t - 2)
    n_finale = finale_length(bucket_h)
    i_count = 2 * n + n_finale
    t_caps = 4 * n
    heights = {
        "icol": 4 * i_count,
        "tcaps": 4 * (t_caps // 4),
        "lwell": 3,
    }
    for j in range(n):
        heights[f"bucket{j}"] = bucket_h
    return a, b, c, t, bucket_h, n_finale, heights


def compile_asp(inst: N3DMInstance, pieceset: str = "ITL") -> Instance:
    if pieceset not in PIECESETS:
        raise InvalidInstance(f"pieceset must be one of {PIECESETS}")
    a, b, c, t, bucket_h, n_finale, heights = _geometry(inst)
    n = inst.n
    order = [f"bucket{j}" for j in range(n)] + ["icol", "tcaps", "lwell"]
    widths = {name: 3 for name in order if name.startswith("bucket")}
    widths.update({"icol": 1, "tcaps": 4, "lwell": 2})
    height = max(heights.values())
    width = 1 + sum(widths[name] + 1 for name in order)
    grid = GridPainter(width, height)
    x = 0
    grid.fill_col(0, 0, height)
    positions = {}
    for name in order:
        x0 = x + 1
        positions[name] = x0
        pedestal = height - heights[name]
        for cc in range(x0, x0 + widths[name]):
            grid.fill_col(cc, 0, pedestal)
        if name.startswith("bucket"):
            j = int(name[6:])
            grid.fill_rect(x0, pedestal, x0 + 3, pedestal + 4 * a[j])
        if name == "lwell":
            # notch for the lone finale L: it drops in as an L-L shape
            grid.fill(x0, pedestal)
            grid.fill(x0, pedestal + 1)
        x = x0 + widths[name]
        grid.fill_col(x, 0, height)
    board = grid.freeze()
    sequence, _ = build_sequence(inst)
    meta = ReductionMeta(
        construction="asp-ITL",
        source=(
            f"n3dm a={','.join(map(str, inst.a))} b={','.join(map(str, inst.b))} "
            f"c={','.join(map(str, inst.c))} (rescaled x8+1/+2/-3)"
        ),
        blowup=Blowup(1),  # the reduction is parsimonious
    )
    out = Instance(board, sequence, Objective.CLEAR, GravityMode.STANDARD, meta)
    if pieceset == "ITJ":
        out = mirror_instance(out, allow_i_asymmetry=True)
    return out


class _AspPlayer:
    def __init__(self, inst: Instance, positions, heights):
        self.player = Player(inst)
        self.positions = positions
        self.heights = heights
        self.board_h = inst.board.height

    def icol(self):
        x = self.positions["icol"]
        h = self.player.column_height(x)
        self.player.place_cells(P.I, [(x, h + k) for k in range(4)])

    def tcap(self):
        x0 = self.positions["tcaps"]
        heights = [self.player.column_height(x0 + i) for i in range(4)]
        low = min(heights)
        rel = tuple(h - low for h in heights)
        if rel == (0, 0, 0, 0):
            cells = [(x0, low), (x0 + 1, low), (x0 + 2, low), (x0 + 1, low + 1)]
        elif rel == (1, 2, 1, 0):
            cells = [(x0 + 3, low), (x0 + 3, low + 1), (x0 + 3, low + 2), (x0 + 2, low + 1)]
        elif rel == (0, 1, 1, 2):
            b = low - 1
            cells = [(x0, b + 1), (x0, b + 2), (x0, b + 3), (x0 + 1, b + 2)]
        elif rel == (2, 1, 0, 1):
            b = low - 2
            cells = [(x0 + 1, b + 3), (x0 + 2, b + 3), (x0 + 3, b + 3), (x0 + 2, b + 2)]
        else:
            raise InvalidInstance(f"unexpected T-cap profile {rel}")
        self.player.place_cells(P.T, cells)

    def unit(self, bucket: int, stage: int):
        # a unit is filled L, T, T: the L hugs the left wall, the first T
        # leans on the right wall with its nub over the L's foot, the second
        # caps the block
        x0 = self.positions[f"bucket{bucket}"]
        hs = [self.player.column_height(x0 + i) for i in range(3)]
        base = min(hs) - (2 if stage == 2 else 0)
        if stage == 0:
            cells = [(x0, base), (x0, base + 1), (x0, base + 2), (x0 + 1, base)]
            piece = P.L
        elif stage == 1:
            cells = [(x0 + 2, base), (x0 + 2, base + 1), (x0 + 2, base + 2), (x0 + 1, base + 1)]
            piece = P.T
        else:
            cells = [(x0, base + 3), (x0 + 1, base + 3), (x0 + 2, base + 3), (x0 + 1, base + 2)]
            piece = P.T
        self.player.place_cells(piece, cells)

    def lwell(self):
        # earlier line clears shift the pocket, so read its base off the
        # nub column, which is solid right up to the hole
        x0 = self.positions["lwell"]
        p = self.player.column_height(x0 + 1)
        self.player.place_cells(
            P.L,
            [(x0, p + 2), (x0 + 1, p), (x0 + 1, p + 1), (x0 + 1, p + 2)],
        )


def witness_asp(
    inst: N3DMInstance, matching, pieceset: str = "ITL"
) -> tuple[Instance, list[PieceState]]:
    """matching: list of (ai, bj, ck) value triples of the original instance,
    each summing to t, one element from each set."""
    a, b, c, t, bucket_h, n_finale, heights = _geometry(inst)
    n = inst.n
    triples = [tuple(tr) for tr in matching]
    if sorted(v for tr in triples for v in tr) != sorted(inst.a + inst.b + inst.c):
        raise InvalidInstance("matching must cover every integer exactly once")
    for tr in triples:
        if sum(tr) != inst.t:
            raise InvalidInstance(f"triple {tr} does not sum to t={inst.t}")
    bucket_of_a = {8 * tr[0] + 1: j for j, tr in enumerate(triples)}
    bucket_of_b = {8 * tr[1] + 2: bucket_of_a[8 * tr[0] + 1] for tr in triples}
    bucket_of_c = {8 * tr[2] - 3: bucket_of_b[8 * tr[1] + 2] for tr in triples}
    # compile with buckets ordered by the matching's a-values
    ordered = N3DMInstance(
        tuple(tr[0] for tr in triples),
        inst.b,
        inst.c,
        )
    base_inst = compile_asp(ordered, "ITL")
    _, _, _, _, _, _, heights = _geometry(ordered)
    order = [f"bucket{j}" for j in range(n)] + ["icol", "tcaps", "lwell"]
    widths = dict({name: 3 for name in order if name.startswith("bucket")},
                  icol=1, tcaps=4, lwell=2)
    positions = {}
    x = 0
    for name in order:
        positions[name] = x + 1
        x += widths[name] + 1
    play = _AspPlayer(base_inst, positions, heights)
    # per number the stream (I, (T,L,T)^(m-1), T, T) regroups as
    # I, T, (L,T,T)^(m-1), T: the loose leading and trailing T go to the cap
    # well, every (L,T,T) chunk builds one bucket unit
    for values, bucket_map in ((b, bucket_of_b), (c, bucket_of_c)):
        for value in values:
            bucket = bucket_map[value]
            play.icol()
            play.tcap()
            for _ in range(value - 1):
                play.unit(bucket, 0)
                play.unit(bucket, 1)
                play.unit(bucket, 2)
            play.tcap()
    play.lwell()
    for _ in range(n_finale):
        play.icol()
    script = play.player.finish()
    if not play.player.board.is_empty():
        raise InvalidInstance("witness did not clear the board\n" + play.player.board.render(12))
    out = base_inst
    if pieceset == "ITJ":
        out = mirror_instance(base_inst, allow_i_asymmetry=True)
        script = [_mirror_state(st, base_inst.board.width) for st in script]
    return out, script
