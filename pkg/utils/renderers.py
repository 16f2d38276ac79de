"""Plain-text renderers for root tables, atlases, case reports and graphs."""

from __future__ import annotations
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple

from models.superalgebra import Parity, SuperDim


ATLAS_HEADER = "# {algebra} parabolic | dim M | depth | growth vector"


def render_growth(growth: Sequence[SuperDim]) -> str:
    """Growth vector as ``(0|7, 1|0)``."""
    return "(" + ", ".join(sd.compact() for sd in growth) + ")"


def parse_growth(text: str) -> List[SuperDim]:
    body = text.strip().strip("()")
    return [SuperDim.parse(part) for part in body.split(",")]


def render_root_table(title: str, rank: int, columns: Mapping[Parity, Sequence[Tuple[int, ...]]]) -> str:
    """Negative roots as digit strings |m_1..m_r|, one line per parity."""
    lines = [f"# {title} negative roots |m1..m{rank}|"]
    for parity, name in ((Parity.EVEN, "even"), (Parity.ODD, "odd")):
        cells = ["".join(str(c) for c in coeffs) for coeffs in columns.get(parity, [])]
        lines.append(f"{name} | " + " ".join(cells))
    return "\n".join(lines) + "\n"


def parse_root_table(text: str) -> Dict[Parity, List[Tuple[int, ...]]]:
    result: Dict[Parity, List[Tuple[int, ...]]] = {}
    for line in text.splitlines():
        if line.startswith("#") or "|" not in line:
            continue
        name, cells = line.split("|", 1)
        parity = Parity.EVEN if name.strip() == "even" else Parity.ODD
        result[parity] = [tuple(int(ch) for ch in cell) for cell in cells.split()]
    return result


def render_atlas_row(label: str, dim: SuperDim, depth: int, growth: Sequence[SuperDim]) -> str:
    return f"{label} | {dim} | {depth} | {render_growth(growth)}"


def render_atlas(algebra_display: str, rows: Iterable[Tuple[str, SuperDim, int, Sequence[SuperDim]]]) -> str:
    lines = [ATLAS_HEADER.format(algebra=algebra_display)]
    for label, dim, depth, growth in rows:
        lines.append(render_atlas_row(label, dim, depth, growth))
    return "\n".join(lines) + "\n"


def render_case_report(report) -> str:
    """Human readable summary of a CaseReport."""
    lines = [
        f"case: {report.case}",
        f"reduction: {report.reduction}",
        f"status: {report.status}",
    ]
    if report.level_dims:
        levels = ", ".join(f"g{k}={v}" for k, v in sorted(report.level_dims.items()))
        lines.append(f"levels: {levels}")
    if report.total_dim:
        lines.append(f"total: {report.total_dim}")
    if report.growth_vector:
        lines.append(f"growth: ({', '.join(report.growth_vector)})  depth {report.depth}")
    if report.null_span is not None:
        lines.append(f"null span: {report.null_span} full={report.null_span_full}")
    if report.jacobi_ok is not None:
        lines.append(f"jacobi: {'ok' if report.jacobi_ok else 'FAILED'}")
    if report.symbol_match is not None:
        lines.append(f"symbol: {'agrees' if report.symbol_match else 'DIFFERS'} with the full algebra")
    if report.oracle_match is not None:
        lines.append(f"oracle: {'match' if report.oracle_match else 'MISMATCH'}")
    if report.error_message:
        lines.append(f"error: {report.error_message}")
    lines.append(f"passed: {report.passed}")
    return "\n".join(lines) + "\n"


def render_edges(edges: Iterable[Tuple[object, object]]) -> str:
    return "".join(f"{a} -- {b}\n" for a, b in edges)
