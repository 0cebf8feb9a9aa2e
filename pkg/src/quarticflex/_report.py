"""Render results as tables, JSON or CSV.

Every renderer returns the complete text, the command line prints it. The
output only depends on its input so that repeated runs are byte-identical.
"""

import csv
import io
import json
import logging

from ._utils import format_complex

logger = logging.getLogger(__name__)


FORMATS = ("table", "json", "csv")

#: Rendering of an orbit shape part without orbits in tables
EMPTY_SHAPE = "—"


def _pair(value):
    value = complex(value)
    return [value.real, value.imag]


def _dump_json(data):
    return json.dumps(data, indent=2, sort_keys=True, ensure_ascii=False)


def _dump_csv(header, rows):
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue().rstrip("\n")


def _dump_table(header, rows, *, indent=""):
    """Align `rows` under `header` in columns.

    Examples
    --------
    >>> print(_dump_table(("name", "n"), [("I(a=6)", 12), ("IV(1)", 24)]))
    name    n
    I(a=6)  12
    IV(1)   24
    """
    cells = [[str(cell) for cell in header]] + [[str(c) for c in r] for r in rows]
    widths = [max(len(row[i]) for row in cells) for i in range(len(header))]
    lines = []
    for row in cells:
        line = "  ".join(cell.ljust(width) for cell, width in zip(row, widths))
        lines.append(indent + line.rstrip())
    return "\n".join(lines)


def _check_format(fmt):
    if fmt not in FORMATS:
        msg = f"unknown output format {fmt!r}, expected one of {', '.join(FORMATS)}"
        raise ValueError(msg)


def _shape(part):
    return part or EMPTY_SHAPE


def _flex_rows(records):
    return [
        (str(record.point), record.contact_order, record.weight, record.flex_order)
        for record in records
    ]


_FLEX_HEADER = ("point", "contact", "weight", "flex order")


def render_classification(report, fmt="table"):
    """Render a :class:`~quarticflex._kuribayashi.ClassificationReport`.

    The table mirrors the cells of the classification tables, a count and an
    orbit shape for both kinds of flexes.
    """
    _check_format(fmt)
    if fmt == "json":
        return _dump_json(report.to_dict())
    if fmt == "csv":
        return _dump_csv(
            ("a", "b", "c", "case", "ordinary", "hyperflex", "orbit_shape", "table_row"),
            [
                (
                    *(format_complex(v) for v in report.params),
                    report.case,
                    report.ordinary_count,
                    report.hyperflex_count,
                    report.orbit_shape,
                    report.table_row,
                )
            ],
        )

    summary = _dump_table(
        ("", "count", "orbit shape"),
        [
            ("ordinary", report.ordinary_count, _shape(report.ordinary_shape)),
            ("hyperflex", report.hyperflex_count, _shape(report.hyperflex_shape)),
        ],
    )
    lines = [
        f"curve      C{report.params}",
        f"case       {report.case}",
        f"table row  {report.table_row}",
        "",
        summary,
        "",
        _dump_table(_FLEX_HEADER, _flex_rows(report.flexes)),
    ]
    mismatch = report.diagnostics.get("mismatch")
    if mismatch:
        lines += ["", f"note: {mismatch}"]
    return "\n".join(lines)


def render_flexes(records, fmt="table"):
    """Render a list of :class:`~quarticflex._geometry.FlexRecord`."""
    _check_format(fmt)
    weight_sum = sum(record.weight for record in records)
    if fmt == "json":
        return _dump_json(
            {
                "flexes": [record.to_dict() for record in records],
                "weight_sum": weight_sum,
            }
        )
    if fmt == "csv":
        return _dump_csv(
            ("x", "y", "z", "contact_order", "weight"),
            [
                (*(format_complex(c) for c in r.point.coords), r.contact_order, r.weight)
                for r in records
            ],
        )
    hyperflexes = sum(record.is_hyperflex for record in records)
    return "\n".join(
        [
            _dump_table(_FLEX_HEADER, _flex_rows(records)),
            "",
            f"{len(records)} flexes, {hyperflexes} hyperflexes, weight sum {weight_sum}",
        ]
    )


def render_orbits(params, orbits, fmt="table"):
    """Render the fixed locus of the sign flip group as orbits."""
    _check_format(fmt)
    rows = [
        (str(o.representative), o.size, o.stabilizer_order) for o in orbits
    ]
    if fmt == "json":
        return _dump_json(
            {
                "params": params.to_dict(),
                "orbits": [
                    {
                        "representative": [_pair(c) for c in o.representative],
                        "size": o.size,
                        "stabilizer_order": o.stabilizer_order,
                        "points": [[_pair(c) for c in p] for p in o.points],
                    }
                    for o in orbits
                ],
            }
        )
    header = ("representative", "size", "stabilizer")
    if fmt == "csv":
        return _dump_csv(header, rows)
    points = sum(o.size for o in orbits)
    return "\n".join(
        [
            f"curve  C{params}",
            "",
            _dump_table(header, rows),
            "",
            f"{len(orbits)} orbits, {points} points with nontrivial stabilizer",
        ]
    )


def render_verification(summary, fmt="table"):
    """Render the summary of a resultant identity sweep.

    Parameters
    ----------
    summary : dict
        With the keys ``samples``, ``identities``, ``max_relative_error``,
        ``threshold``, ``printed_ratio``, ``contact_checks``,
        ``contact_failures`` and ``passed``.
    """
    _check_format(fmt)
    if fmt == "json":
        return _dump_json(summary)
    keys = sorted(summary)
    if fmt == "csv":
        return _dump_csv(keys, [[summary[key] for key in keys]])
    verdict = "passed" if summary["passed"] else "FAILED"
    return "\n".join(
        [
            f"{summary['identities']} identities × {summary['samples']} samples, "
            f"max rel err {summary['max_relative_error']:.3g} "
            f"(threshold {summary['threshold']:.3g})",
            f"ratio to the printed constant: {summary['printed_ratio']:.6g}",
            f"hyperflex contact orders: {summary['contact_checks']} checked, "
            f"{summary['contact_failures']} failed",
            verdict,
        ]
    )


def _verdict(check):
    if check.reproduced:
        return "ok"
    if check.example.discrepancy:
        return "documented"
    return "FAILED"


def _example_counts(check):
    if check.report is None:
        return "singular", EMPTY_SHAPE
    report = check.report
    counts = f"{report.ordinary_count}/{report.hyperflex_count}"
    return counts, report.orbit_shape or EMPTY_SHAPE


def render_examples(checks, fmt="table"):
    """Render a list of :class:`~quarticflex._kuribayashi.ExampleCheck`."""
    _check_format(fmt)
    if fmt == "json":
        return _dump_json(
            [
                {
                    "name": check.example.name,
                    "verdict": _verdict(check),
                    "counts_match": check.counts_match,
                    "shapes_match": check.shapes_match,
                    "unmatched_representatives": [
                        [_pair(c) for c in point]
                        for point in check.unmatched_representatives
                    ],
                    "singular": list(check.singular),
                    "discrepancy": check.example.discrepancy,
                    "report": check.report.to_dict() if check.report else None,
                }
                for check in checks
            ]
        )
    header = ("example", "counts", "orbit shape", "verdict")
    rows = [
        (check.example.name, *_example_counts(check), _verdict(check))
        for check in checks
    ]
    if fmt == "csv":
        return _dump_csv(header, rows)
    lines = [_dump_table(header, rows)]
    notes = [
        f"{check.example.name}: {check.example.discrepancy}"
        for check in checks
        if check.example.discrepancy and not check.reproduced
    ]
    if notes:
        lines += ["", *notes]
    return "\n".join(lines)
