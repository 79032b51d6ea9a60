"""The bundled PTS specifications and the hand-written judgment corpus."""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources

from .pts import PtsSpec
from .syntax import Judgment, SpecFile, parse_judgments, parse_spec
from .terms import Context, Term

__all__ = ["CorpusEntry", "SYSTEMS", "load_spec", "load_corpus", "spec_text"]

SYSTEMS = ("stlc", "systemf", "lambdapi", "coc")


@dataclass(frozen=True)
class CorpusEntry:
    system: str
    spec: PtsSpec
    ctx: Context
    term: Term
    type: Term
    line: int

    @property
    def label(self) -> str:
        return f"{self.system}:{self.line}"


def spec_text(name: str) -> str:
    return resources.files("lpmod.data.specs").joinpath(f"{name}.pts").read_text("utf-8")


def load_spec(name: str) -> SpecFile:
    return parse_spec(spec_text(name), f"{name}.pts")


def load_corpus(systems=SYSTEMS) -> list:
    out = []
    for name in systems:
        spec = load_spec(name).spec
        path = f"{name}.jdg"
        text = resources.files("lpmod.data.corpus").joinpath(path).read_text("utf-8")
        for j in parse_judgments(text, spec.sorts, path):
            out.append(_entry(name, spec, j))
    return out


def _entry(name: str, spec: PtsSpec, j: Judgment) -> CorpusEntry:
    return CorpusEntry(name, spec, j.ctx, j.term, j.type, j.span.start[0] if j.span else 0)
