"""Trajectory file format.

Text, one robot per block, one timeline entry per line:

    version 1
    robots <m>
    robot <index> slots <count>
    dwell <t0> <t1> <x> <y>
    moveseg <t0> <t1> <ax> <ay> <bx> <by>
    movearc <t0> <t1> <cx> <cy> <r> <a0> <extent> <ccw>
    retractseg <t0> <t1> <cx> <cy> <ax> <ay> <bx> <by>
    retractarc <t0> <t1> <cx> <cy> <acx> <acy> <r> <a0> <extent> <ccw>

Floats carry 17 significant digits so a load after a save is bit-identical;
the validator and renderer consume these files without touching planner
state. retract* entries carry the parked center first, then the mover piece
that the retraction shadows.
"""

from __future__ import annotations

import io
from typing import Sequence

from .coordinate import (DwellMotion, MoveMotion, RetractMotion, Slot,
                         Trajectory)
from .errors import ParseError
from .geom import CircArc, Point, Segment
from .scenario import _fmt, _floats, _ints, _Lines

FORMAT_VERSION = 1


def _piece_fields(piece) -> tuple[str, list[str]]:
    if isinstance(piece, Segment):
        return "seg", [_fmt(piece.a.x), _fmt(piece.a.y),
                       _fmt(piece.b.x), _fmt(piece.b.y)]
    return "arc", [_fmt(piece.center.x), _fmt(piece.center.y),
                   _fmt(piece.radius), _fmt(piece.a0), _fmt(piece.extent),
                   "1" if piece.ccw else "0"]


def save_trajectories(trajectories: Sequence[Trajectory]) -> str:
    out = io.StringIO()
    out.write(f"version {FORMAT_VERSION}\n")
    out.write(f"robots {len(trajectories)}\n")
    for tr in trajectories:
        out.write(f"robot {tr.robot} slots {len(tr.slots)}\n")
        for s in tr.slots:
            t = f"{_fmt(s.t0)} {_fmt(s.t1)}"
            mo = s.motion
            if isinstance(mo, DwellMotion):
                out.write(f"dwell {t} {_fmt(mo.point.x)} {_fmt(mo.point.y)}\n")
            elif isinstance(mo, MoveMotion):
                kind, fields = _piece_fields(mo.piece)
                name = "moveseg" if kind == "seg" else "movearc"
                out.write(f"{name} {t} {' '.join(fields)}\n")
            else:
                kind, fields = _piece_fields(mo.piece)
                name = "retractseg" if kind == "seg" else "retractarc"
                out.write(f"{name} {t} {_fmt(mo.center.x)} "
                          f"{_fmt(mo.center.y)} {' '.join(fields)}\n")
    return out.getvalue()


def save_trajectories_path(trajectories: Sequence[Trajectory],
                           path: str) -> None:
    with open(path, "w", encoding="ascii") as fh:
        fh.write(save_trajectories(trajectories))


def _parse_piece(lineno: int, kind: str, toks: list[str]):
    if kind == "seg":
        vals = _floats(lineno, toks, 4)
        return Segment(Point(vals[0], vals[1]), Point(vals[2], vals[3]))
    vals = _floats(lineno, toks[:5], 5)
    (ccw,) = _ints(lineno, toks[5:], 1)
    if ccw not in (0, 1):
        raise ParseError(f"line {lineno}: ccw flag must be 0 or 1")
    if vals[2] <= 0.0:
        raise ParseError(f"line {lineno}: arc radius must be positive")
    return CircArc(Point(vals[0], vals[1]), vals[2], vals[3], vals[4],
                   ccw == 1)


def load_trajectories(text: str) -> list[Trajectory]:
    lines = _Lines(io.StringIO(text))
    lineno, toks = lines.next("version")
    (ver,) = _ints(lineno, toks, 1)
    if ver != FORMAT_VERSION:
        raise ParseError(f"line {lineno}: unsupported version {ver}")
    lineno, toks = lines.next("robots")
    (m,) = _ints(lineno, toks, 1)
    if m < 1:
        raise ParseError(f"line {lineno}: robot count must be positive")
    trajectories: list[Trajectory] = []
    for _ in range(m):
        lineno, toks = lines.next("robot")
        if len(toks) != 3 or toks[1] != "slots":
            raise ParseError(f"line {lineno}: malformed robot header")
        robot = _ints(lineno, toks[:1], 1)[0]
        n_slots = _ints(lineno, toks[2:], 1)[0]
        if n_slots < 1:
            raise ParseError(f"line {lineno}: robot {robot} has no slots")
        slots: list[Slot] = []
        for _ in range(n_slots):
            lineno, toks = lines.next_any()
            kind, rest = toks[0], toks[1:]
            if len(rest) < 2:
                raise ParseError(f"line {lineno}: missing slot times")
            t0, t1 = _floats(lineno, rest[:2], 2)
            body = rest[2:]
            if kind == "dwell":
                vals = _floats(lineno, body, 2)
                motion = DwellMotion(Point(vals[0], vals[1]))
            elif kind in ("moveseg", "movearc"):
                motion = MoveMotion(_parse_piece(
                    lineno, "seg" if kind == "moveseg" else "arc", body))
            elif kind in ("retractseg", "retractarc"):
                if len(body) < 2:
                    raise ParseError(f"line {lineno}: retract needs a center")
                center = _floats(lineno, body[:2], 2)
                motion = RetractMotion(
                    Point(center[0], center[1]),
                    _parse_piece(lineno,
                                 "seg" if kind == "retractseg" else "arc",
                                 body[2:]))
            else:
                raise ParseError(f"line {lineno}: unknown entry '{kind}'")
            if t1 < t0:
                raise ParseError(f"line {lineno}: slot times reversed")
            slots.append(Slot(t0, t1, motion))
        trajectories.append(Trajectory(robot, slots))
    if lines.pos != len(lines.rows):
        lineno = lines.rows[lines.pos][0]
        raise ParseError(f"line {lineno}: trailing content")
    return trajectories


def load_trajectories_path(path: str) -> list[Trajectory]:
    with open(path, "r", encoding="ascii") as fh:
        return load_trajectories(fh.read())
