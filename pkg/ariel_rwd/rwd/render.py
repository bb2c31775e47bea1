"""
Markdown rendering of a built model, for comparison against the drawn net.
"""

import logging
from pathlib import Path

import jinja2

from ariel_rwd.gspn.net import ArcKind, PetriNet, Timed
from ariel_rwd.rwd.builder import ASSUMPTIONS, RwdModel
from ariel_rwd.utils.file_utils import format_number

TEMPLATE_DIR = Path(__file__).parent / "templates"
TEMPLATE_NAME = "model.md.j2"


def _arc_summary(net: PetriNet, transition: str) -> str:
    parts = []
    for arc in net.arcs:
        if arc.transition != transition:
            continue
        weight = f"{arc.multiplicity}*" if arc.multiplicity > 1 else ""
        if arc.kind is ArcKind.INPUT:
            parts.append(f"in {weight}{arc.place}")
        elif arc.kind is ArcKind.OUTPUT:
            parts.append(f"out {weight}{arc.place}")
        else:
            parts.append(f"inhibited by {arc.multiplicity}*{arc.place}")
    return ", ".join(parts)


def _transition_rows(model: RwdModel) -> list[dict[str, str]]:
    rows = []
    for t in model.net.transitions:
        if isinstance(t.kind, Timed):
            kind, detail = "timed", f"rate {format_number(t.kind.rate)}, {t.kind.server.value} server"
        else:
            kind, detail = "immediate", f"weight {format_number(t.kind.weight)}, priority {t.kind.priority}"
        rows.append(
            {
                "name": t.name,
                "family": model.family_of(t.name),
                "kind": kind,
                "detail": detail,
                "arcs": _arc_summary(model.net, t.name),
            }
        )
    return rows


def render_model(model: RwdModel) -> str:
    """
    Render places with their roles, transitions, arcs and the modelling
    assumptions as Markdown.

    Raises:
        jinja2.TemplateError: If the bundled template is missing or broken
    """
    env = jinja2.Environment(
        loader=jinja2.FileSystemLoader(TEMPLATE_DIR),
        autoescape=jinja2.select_autoescape(["html", "xml"]),
        keep_trailing_newline=True,
    )
    template = env.get_template(TEMPLATE_NAME)

    params = model.params
    rates = [
        ("rate_activity", params.rate_activity),
        ("rate_fault", params.rate_fault),
        ("rate_cycle", params.rate_cycle),
        ("rate_repair", params.rate_repair),
        ("rate_timeout", params.rate_timeout),
    ]
    text = template.render(
        params=params,
        threshold=params.threshold,
        rates=[(name, format_number(value)) for name, value in rates] + [("timeout server", params.timeout_server.value)],
        places=[{"name": p.name, "initial": p.initial, "role": model.places.get(p.name, "")} for p in model.net.places],
        transitions=_transition_rows(model),
        assumptions=ASSUMPTIONS,
    )
    logging.debug(f"Rendered model {params.policy}: {len(text)} characters")
    return text
