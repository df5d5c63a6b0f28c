"""Evaluation kernels with a compiled fast path.

At import time the Cython extension (_speed) is preferred; the pure-Python
module is the always-available fallback and the reference semantics. The
compiled path only handles alphabets and domains that fit machine words;
wider inputs silently take the pure path.
"""

from __future__ import annotations

from array import array

from . import pure
from .encode import (RelationalProgram, TemporalProgram, compile_relational,
                     compile_relational_orders, compile_temporal,
                     encode_structure, encode_trace)

try:
    from . import _speed  # type: ignore[attr-defined]
except ImportError:  # extension not built; pure fallback
    _speed = None

HIT = pure.HIT
EXHAUSTED = pure.EXHAUSTED
MORE = pure.MORE

import os

_FORCE_PURE = os.environ.get("LEXDIALOG_PURE", "") not in ("", "0")


def active_backend() -> str:
    return "compiled" if (_speed is not None and not _FORCE_PURE) else "pure"


def compiled_available() -> bool:
    return _speed is not None


def force_pure(flag: bool) -> None:
    """Test hook: route every call through the pure backend."""
    global _FORCE_PURE
    _FORCE_PURE = flag


def _use_speed() -> bool:
    return _speed is not None and not _FORCE_PURE


def ltlf_table(program: TemporalProgram, masks: list[int]) -> bytes:
    if _use_speed() and len(program.atom_order) <= 64:
        return bytes(_speed.ltlf_table(program.code, program.n_nodes,
                                       array("Q", masks)))
    return bytes(pure.ltlf_table(program.code, program.n_nodes, masks))


def fo_eval(program: RelationalProgram, n_ind: int, pred_masks: list[int],
            func_vals: list[int], env: list[int]) -> bool:
    if _use_speed() and len(program.pred_order) <= 64:
        return bool(_speed.fo_eval(program.code, program.root, n_ind,
                                   array("q", pred_masks),
                                   array("q", func_vals),
                                   array("q", env or [0])))
    return pure.fo_eval(program.code, program.root, n_ind, pred_masks,
                        func_vals, env or [0])


def fo_scan(program: RelationalProgram, size: int, n_preds: int,
            func_los: list[int], radii: list[int], ext: int,
            digits: list[int], max_count: int):
    if (_use_speed() and n_preds <= 64 and size * n_preds <= 62
            and ext < (1 << 62)):
        status, ext, digits, scanned = _speed.fo_scan(
            program.code, program.root, program.n_slots, size, n_preds,
            array("q", func_los or [0]), array("q", radii or [0]),
            ext, array("q", digits or [0]), max_count)
        return status, ext, list(digits)[: len(radii)], scanned
    return pure.fo_scan(program.code, program.root, program.n_slots, size,
                        n_preds, func_los, radii, ext, digits, max_count)


__all__ = [
    "RelationalProgram", "TemporalProgram", "compile_relational",
    "compile_relational_orders", "compile_temporal", "encode_structure",
    "encode_trace", "ltlf_table", "fo_eval", "fo_scan", "active_backend",
    "compiled_available", "force_pure", "HIT", "EXHAUSTED", "MORE",
]
