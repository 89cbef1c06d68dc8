"""Reduction-instance compilers and witness generators.

compile_pair / witness_for_pair dispatch over all sixteen two-piece
constructions; the survival and ASP builders live beside them.
"""

from __future__ import annotations

from ..chain import ThreePartitionInstance
from ..engine import GravityMode
from ..model import Instance
from . import asp, ifamily, survival, tower
from .base import (
    InvalidInstance,
    InvalidPartition,
    UnsupportedPair,
    WitnessBug,
)

I_PAIRS = ("IJ", "IL", "IO", "IS", "IT", "IZ")
ALL_PAIRS = I_PAIRS + tower.BASE_PAIRS + tuple(tower.MIRRORS)


def compile_pair(pair: str, inst: ThreePartitionInstance,
                 mode: GravityMode = GravityMode.STANDARD, **kwargs) -> Instance:
    pair = pair.upper()
    if pair in I_PAIRS:
        return ifamily.compile_pair(pair, inst, mode=mode, **kwargs)
    if pair in tower.BASE_PAIRS or pair in tower.MIRRORS:
        return tower.compile_pair(pair, inst, mode=mode)
    raise UnsupportedPair(pair)


def witness_for_pair(pair: str, inst: ThreePartitionInstance, partition,
                     mode: GravityMode = GravityMode.STANDARD, **kwargs):
    pair = pair.upper()
    if pair in I_PAIRS:
        return ifamily.witness_for_pair(pair, inst, partition, mode=mode, **kwargs)
    if pair in tower.BASE_PAIRS or pair in tower.MIRRORS:
        if mode is not GravityMode.STANDARD:
            raise InvalidInstance(f"{pair} is only claimed under standard gravity")
        return tower.witness_for_pair(pair, inst, partition)
    raise UnsupportedPair(pair)


compile_survival = survival.compile_survival
compile_survival_clearing = survival.compile_survival_clearing
witness_survival = survival.witness_survival
witness_survival_clearing = survival.witness_survival_clearing
compile_asp = asp.compile_asp
witness_asp = asp.witness_asp

__all__ = [
    "ALL_PAIRS",
    "I_PAIRS",
    "InvalidInstance",
    "InvalidPartition",
    "UnsupportedPair",
    "WitnessBug",
    "compile_asp",
    "compile_pair",
    "compile_survival",
    "compile_survival_clearing",
    "witness_asp",
    "witness_for_pair",
    "witness_survival",
    "witness_survival_clearing",
]
