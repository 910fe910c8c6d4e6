"""Shared fixtures and pipeline helpers for the test suite."""

from __future__ import annotations

from pathlib import Path

import pytest

from sketchsynth import engine
from sketchsynth.classtable import build_class_table
from sketchsynth.desugar import desugar
from sketchsynth.lowering import lower_program
from sketchsynth.parser import parse_program, parse_program_texts

PROGRAMS = Path(__file__).parent / "programs"


def program_files(*names):
    return [str(PROGRAMS / n) for n in names]


def run_front_end(files=None, texts=None):
    """parse + desugar + classtable + lowering.

    Returns (desugared ast, registry, class table, IrProgram).
    """
    ast = parse_program(files) if files else parse_program_texts(texts)
    ast, _spec_map, registry = desugar(ast)
    table = build_class_table(ast)
    program = lower_program(ast, table, registry)
    return ast, registry, table, program


@pytest.fixture
def front_end():
    return run_front_end


@pytest.fixture
def default_config():
    return engine.EngineConfig()


MULT2 = ("Test.java", "SimpleMath.java")
DB = ("DBConnection.java", "Automaton.java", "TestDBConnection.java")
DB_TWO_STATE = ("DBConnection.java", "AutomatonTwoState.java",
                "TestDBConnection.java")
CADSR = ("CADsR.java", "Automaton.java", "TestCADsR.java")
CADSR_SMALL = ("CADsR.java", "Automaton.java", "TestCADsRSmall.java")
