# app/routers/bound.py
"""`bound`: evalúa τ₂, τ₃ o τ_N sobre un estado guardado."""
from __future__ import annotations

import logging

import click

from app.core.config import DETECT_TOL
from app.models.report import BoundReport
from app.models.state import PureState
from app.routers.params import emit, emit_json
from app.services.bounds import detects, pure_concurrence, tau_n, tau_three, tau_two
from app.utils.state_io import load_state

logger = logging.getLogger(__name__)

METHODS = {"tau2": tau_two, "tau3": tau_three, "taun": tau_n}
TOP_PAIRS = 5


def render_bound(report: BoundReport, method: str) -> str:
    verdict = "entrelazado" if detects(report, DETECT_TOL) else "no detectado"
    lines = [
        f"método       {method}",
        f"dims         {','.join(map(str, report.dims))}",
        f"convención   {report.convention.value}",
        f"prefactor    {report.prefactor:.10g}",
        f"kappa        {report.kappa:.10g}",
        f"peso         {report.weight:.10g}",
        f"pares        {len(report.records)} ({report.active_pairs} con C > 0)",
        f"tau          {report.tau:.12g}",
        f"veredicto    {verdict}",
    ]
    active = sorted((r for r in report.records if r.concurrence > 0), key=lambda r: -r.concurrence)
    if active:
        lines.append("")
        lines.append("corte    generadores        C")
        for r in active[:TOP_PAIRS]:
            s = r.spectrum
            lines.append(f"{s.bipartition:<8} {str(s.left_gen)}x{str(s.right_gen):<8} {r.concurrence:.10g}")
    return "\n".join(lines)


@click.command("bound")
@click.option("--state", "state_path", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--method", type=click.Choice(list(METHODS)), default="taun", show_default=True)
@click.option("--json", "as_json", is_flag=True, help="Emitir un objeto JSON en lugar de la tabla.")
def command(state_path, method, as_json):
    """Cota inferior de la concurrencia del estado en STATE."""
    state = load_state(state_path)
    report = METHODS[method](state)
    pure_c2 = pure_concurrence(state) ** 2 if isinstance(state, PureState) else None
    if as_json:
        emit_json(report, method=method, state=str(state_path), pure_concurrence_squared=pure_c2)
        return
    text = render_bound(report, method)
    if pure_c2 is not None:
        text += f"\n\nC² (estado puro)  {pure_c2:.12g}"
    emit(text)
