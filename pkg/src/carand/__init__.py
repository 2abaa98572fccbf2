"""Pseudo-random bits from elementary cellular automata, and the tests to judge them."""
from __future__ import annotations

__version__ = "0.1.0"

from .ca import (CYCLIC, FIXED_ZERO, Lattice, RuleTable, evolve, evolve_rows, rule_from_number,
                 rule_metadata, step)
from .keystream import GenSpec, generate_corpus, generate_sequence
from .battery import BatteryConfig, BatteryReport, run_battery, reproduce_paper
from .cipher import CipherKey, decrypt, encrypt
from .report import render_report

__all__ = [
    "CYCLIC", "FIXED_ZERO", "BatteryConfig", "BatteryReport", "CipherKey", "GenSpec", "Lattice",
    "RuleTable", "decrypt", "encrypt", "evolve", "evolve_rows", "generate_corpus",
    "generate_sequence", "render_report", "reproduce_paper", "rule_from_number",
    "rule_metadata", "run_battery", "step",
]
