"""Figure rendering for the report commands.

Each renderer writes one PNG next to the delimited output so reports
can be eyeballed as well as diffed. Matplotlib is only imported here,
keeping the rest of the library dependency-light.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .core import COUNT_TABLE_KINDS, ConnectorArithmetic, MetaKind
from .query import CompletenessReport, LogicReport, VerificationDiff


def render_stats_figure(
    language_name: str,
    counts: dict[MetaKind, int],
    arithmetic: ConnectorArithmetic,
    out_path: Path,
) -> Path:
    """Bar charts of declaration counts and the rules/connectors balance."""
    fig, (ax_counts, ax_rules) = plt.subplots(1, 2, figsize=(9, 3.5))

    labels = [kind.value for kind in COUNT_TABLE_KINDS]
    values = [counts[kind] for kind in COUNT_TABLE_KINDS]
    ax_counts.bar(labels, values, color="#4878a8")
    ax_counts.set_title(f"{language_name}: declarations")
    ax_counts.set_ylabel("count")
    ax_counts.tick_params(axis="x", rotation=45)

    ax_rules.bar(
        ["rules", "connectors", "2*rules", "savings"],
        [arithmetic.rules, arithmetic.connectors, 2 * arithmetic.rules, arithmetic.savings],
        color=["#4878a8", "#6aa84f", "#b0b0b0", "#cc6644"],
    )
    ax_rules.set_title("connection rules vs connectors")

    fig.tight_layout()
    out_path = Path(out_path)
    fig.savefig(out_path, dpi=120)
    plt.close(fig)
    return out_path


def render_verify_figure(
    completeness: CompletenessReport,
    logic: LogicReport,
    diff: VerificationDiff,
    out_path: Path,
) -> Path:
    """Per-section counts of reported facts against missing/extra diffs."""
    sections = [
        ("graph members", len(completeness.graph_members), diff.graph_members),
        ("structure", len(completeness.structure_links), diff.structure_links),
        ("properties", len(completeness.property_links), diff.property_links),
        ("connections", len(logic.connections), diff.connections),
        ("directions", len(logic.directions), diff.directions),
    ]

    fig, ax = plt.subplots(figsize=(8, 3.5))
    xs = range(len(sections))
    width = 0.28
    ax.bar([x - width for x in xs], [s[1] for s in sections], width, label="reported", color="#4878a8")
    ax.bar(list(xs), [len(s[2].missing) for s in sections], width, label="missing", color="#cc6644")
    ax.bar([x + width for x in xs], [len(s[2].extra) for s in sections], width, label="extra", color="#d8a33c")
    ax.set_xticks(list(xs))
    ax.set_xticklabels([s[0] for s in sections])
    ax.set_ylabel("facts")
    ax.set_title("verification: OK" if diff.empty else "verification: FAIL")
    ax.legend()

    fig.tight_layout()
    out_path = Path(out_path)
    fig.savefig(out_path, dpi=120)
    plt.close(fig)
    return out_path
