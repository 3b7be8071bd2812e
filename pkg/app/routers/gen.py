# app/routers/gen.py
"""`gen`: genera un estado de una familia y lo guarda en formato QSTATE."""
from __future__ import annotations

import logging
from typing import Optional

import click

from app.core.errors import InputError
from app.models.state import Family, PureState, StateFamily
from app.routers.params import DIMS, emit
from app.services.states import family_state, haar_random_pure, isotropic_mix, make_product
from app.utils.state_io import save_state

logger = logging.getLogger(__name__)

FAMILIES = ("ghz", "w", "wmix", "ghzmix", "haar", "bell", "product")


def build_state(family: str, dims: Optional[tuple[int, ...]], p: Optional[float], seed: Optional[int]):
    if family == "haar":
        if p is not None:
            raise InputError("La familia haar no admite --p (no hay mezcla isotrópica definida)")
        return haar_random_pure(dims or (2, 2, 2), 0 if seed is None else seed)
    if family == "product" and seed is not None:
        psi = make_product(dims or (2, 2, 2), seed)
        return psi if p is None else isotropic_mix(psi, p)
    if dims is None:
        dims = (2, 2) if family == "bell" else (2, 2, 2)
    return family_state(StateFamily(family=Family(family), p=p, dims=dims))


@click.command("gen")
@click.option("--family", type=click.Choice(FAMILIES), required=True)
@click.option("--dims", type=DIMS, default=None, help="Dimensiones locales, p. ej. 2,2,2.")
@click.option("--p", "p", type=float, default=None, help="Peso del estado puro en la mezcla isotrópica.")
@click.option("--seed", type=int, default=None)
@click.option("--kind", type=click.Choice(["pure", "density"]), default=None)
@click.option("--out", type=click.Path(dir_okay=False, writable=True), required=True)
def command(family, dims, p, seed, kind, out):
    """Genera un estado y lo escribe en OUT."""
    state = build_state(family, dims, p, seed)
    if kind == "density" and isinstance(state, PureState):
        state = state.to_density()
    elif kind == "pure" and not isinstance(state, PureState):
        raise InputError(f"La familia {family} con p={p} es mixta; usar --kind density")

    comment = f"family={family} dims={','.join(map(str, state.dims))}"
    if p is not None:
        comment += f" p={p!r}"
    if seed is not None:
        comment += f" seed={seed}"
    save_state(state, out, comment=comment)
    kind_name = "pure" if isinstance(state, PureState) else "density"
    logger.info(f"💾 Estado {family} ({kind_name}) guardado en {out}")
    emit(f"{family} {kind_name} dims={state.dims} -> {out}")
