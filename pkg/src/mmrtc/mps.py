"""Minimal free-format MPS reader.

Written independently of the exporter so round-trip tests check real files,
and used by the bundled solver runner to load models.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import SolutionParseError


@dataclass
class MpsVariable:
    name: str
    integer: bool = False
    lower: float = 0.0
    upper: float = math.inf


@dataclass
class MpsRow:
    name: str
    sense: str  # "N", "L", "G", "E"
    terms: dict[str, float] = field(default_factory=dict)
    rhs: float = 0.0


@dataclass
class MpsProblem:
    name: str
    objective: str
    rows: dict[str, MpsRow]
    variables: dict[str, MpsVariable]  # insertion order = column order

    def constraint_rows(self) -> list[MpsRow]:
        return [r for r in self.rows.values() if r.sense != "N"]


def parse_mps(text: str) -> MpsProblem:
    name = ""
    objective: str | None = None
    rows: dict[str, MpsRow] = {}
    variables: dict[str, MpsVariable] = {}
    section = ""
    in_integer = False

    for lineno, raw in enumerate(text.splitlines(), 1):
        if not raw.strip() or raw.lstrip().startswith("*"):
            continue
        if not raw[0].isspace():
            fields = raw.split()
            section = fields[0].upper()
            if section == "NAME" and len(fields) > 1:
                name = fields[1]
            if section == "ENDATA":
                break
            continue
        fields = raw.split()
        if section == "ROWS":
            sense, row_name = fields[0].upper(), fields[1]
            rows[row_name] = MpsRow(row_name, sense)
            if sense == "N" and objective is None:
                objective = row_name
        elif section == "COLUMNS":
            if len(fields) >= 3 and fields[1] == "'MARKER'":
                in_integer = fields[2] == "'INTORG'"
                continue
            if len(fields) >= 2 and "'INTORG'" in fields:
                in_integer = True
                continue
            if len(fields) >= 2 and "'INTEND'" in fields:
                in_integer = False
                continue
            col = fields[0]
            if col not in variables:
                variables[col] = MpsVariable(col, integer=in_integer)
            pairs = fields[1:]
            if len(pairs) % 2:
                raise SolutionParseError(f"MPS line {lineno}: odd COLUMNS fields")
            for row_name, value in zip(pairs[::2], pairs[1::2]):
                if row_name not in rows:
                    raise SolutionParseError(f"MPS line {lineno}: unknown row {row_name}")
                rows[row_name].terms[col] = rows[row_name].terms.get(col, 0.0) + float(value)
        elif section == "RHS":
            pairs = fields[1:]
            for row_name, value in zip(pairs[::2], pairs[1::2]):
                if row_name not in rows:
                    raise SolutionParseError(f"MPS line {lineno}: unknown RHS row {row_name}")
                rows[row_name].rhs = float(value)
        elif section == "RANGES":
            continue
        elif section == "BOUNDS":
            kind = fields[0].upper()
            col = fields[2]
            var = variables.setdefault(col, MpsVariable(col))
            if kind == "BV":
                var.integer = True
                var.lower, var.upper = 0.0, 1.0
            elif kind == "UP":
                var.upper = float(fields[3])
            elif kind == "LO":
                var.lower = float(fields[3])
            elif kind == "FX":
                var.lower = var.upper = float(fields[3])
            elif kind == "MI":
                var.lower = -math.inf
            elif kind == "PL":
                var.upper = math.inf
            elif kind in ("UI", "LI"):
                var.integer = True
                if kind == "UI":
                    var.upper = float(fields[3])
                else:
                    var.lower = float(fields[3])
            else:
                raise SolutionParseError(f"MPS line {lineno}: unsupported bound {kind}")
        else:
            raise SolutionParseError(f"MPS line {lineno}: data outside a known section")

    if objective is None:
        raise SolutionParseError("MPS file has no objective (N) row")
    return MpsProblem(name, objective, rows, variables)
