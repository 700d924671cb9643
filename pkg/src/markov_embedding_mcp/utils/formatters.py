"""Markdown rendering of output documents."""

from ..documents import FlowDocument, GReportDocument, MatrixDocument, VerdictDocument
from .general import format_number

Rows = list[list[float]]


def format_matrix_as_markdown(rows: Rows, digits: int = 17) -> str:
    """Render a matrix as a markdown table with column headers 1..d."""
    d = len(rows)
    lines = [
        "| | " + " | ".join(str(j) for j in range(1, d + 1)) + " |",
        "|---" * (d + 1) + "|",
    ]
    for i, row in enumerate(rows, start=1):
        lines.append(f"| **{i}** | " + " | ".join(format_number(v, digits) for v in row) + " |")
    return "\n".join(lines)


def _field_table(fields: list[tuple[str, object]]) -> list[str]:
    lines = ["| Field | Value |", "|---|---|"]
    for name, value in fields:
        if value is None:
            continue
        shown = format_number(value) if isinstance(value, float | int) else str(value)
        lines.append(f"| {name} | {shown} |")
    return lines


def format_verdict_as_markdown(doc: VerdictDocument) -> str:
    """Render a verdict, its case tag and each generator."""
    lines = []
    title = doc.input.label or f"{doc.input.dim}x{doc.input.dim} matrix"
    lines.append(f"## {title}\n")
    lines.append(format_matrix_as_markdown(doc.input.rows))
    lines.append("")

    case = doc.case_tag
    lines.extend(
        _field_table(
            [
                ("verdict", doc.verdict),
                ("reason", doc.reason),
                ("uniqueness", doc.uniqueness if doc.verdict else None),
                ("pattern", case.pattern if case else None),
                ("min_poly_degree", case.min_poly_degree if case else None),
                ("elapsed_ms", doc.elapsed_ms),
            ]
        )
    )
    if case and case.eigen_data:
        lines.append("\n### Eigenvalues\n")
        for key, z in case.eigen_data.items():
            value = format_number(z.re) if z.im == 0 else f"{format_number(z.re)} + {format_number(z.im)}i"
            lines.append(f"- `{key}` = {value}")
    if doc.necessary:
        lines.append("\n### Necessary conditions\n")
        for key, ok in doc.necessary.items():
            lines.append(f"- {key}: {'pass' if ok else '**fail**'}")
    if doc.model:
        lines.append("\n### Model\n")
        lines.extend(_field_table(list(doc.model.items())))
    for n, g in enumerate(doc.generators, start=1):
        lines.append(
            f"\n### Generator {n} (branch {g.branch}, {g.construction}, "
            f"residual {format_number(g.residual, 3)})\n"
        )
        lines.append(format_matrix_as_markdown(g.matrix))
    return "\n".join(lines).strip()


def format_matrix_document_as_markdown(doc: MatrixDocument) -> str:
    title = doc.label or f"{doc.dim}x{doc.dim} matrix"
    return f"## {title}\n\n{format_matrix_as_markdown(doc.rows)}"


def format_greport_as_markdown(doc: GReportDocument) -> str:
    lines = ["## g-embeddability\n", format_matrix_as_markdown(doc.input.rows), ""]
    lines.extend(
        _field_table(
            [
                ("verdict", doc.verdict),
                ("route", doc.route),
                ("necessary_ok", str(doc.necessary_ok).lower()),
                ("det", doc.det),
                ("b_quantity", doc.b_quantity),
                ("factor_bound", doc.factor_bound),
                ("det_factor_bound", doc.det_factor_bound),
            ]
        )
    )
    return "\n".join(lines)


def format_flow_as_markdown(doc: FlowDocument) -> str:
    lines = [
        f"## Flow at t = {format_number(doc.t)} ({doc.method})\n",
        format_matrix_as_markdown(doc.result.rows),
        "",
    ]
    check = None if doc.det_check is None else str(doc.det_check).lower()
    lines.extend(
        _field_table(
            [("det", doc.det), ("liouville_det", doc.liouville_det), ("det_check", check)]
        )
    )
    return "\n".join(lines)
