"""
reference.py
────────────
Fonction de référence r(θ), dénominateur de la fonction de surprise.

Trois variantes :
  - flat       : r(θ) = 1 (défaut, la surprise redonne la densité a posteriori)
  - parametric : une densité de DensityFamily (ex. Cauchy a priori)
  - tabulated  : une courbe (θ, r) interpolée linéairement, indéfinie hors table

Grammaire des descripteurs (CLI et API) :
  flat
  normal:mean=0,sd=2.5
  cauchy:location=0,scale=0.7071
  student_t:location=0,scale=1,df=3
  table:<chemin vers un CSV theta,value>
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from fbst.errors import DomainError, require
from fbst.maths.special_math import FAMILY_PARAMS, DensityFamily, density_eval

logger = logging.getLogger(__name__)

ArrayLike = Union[float, np.ndarray]


@dataclass(frozen=True)
class ReferenceFunction:
    kind        : str                              # "flat" | "parametric" | "tabulated"
    family      : Optional[DensityFamily] = None
    table_grid  : Optional[np.ndarray] = field(default=None, repr=False, compare=False)
    table_values: Optional[np.ndarray] = field(default=None, repr=False, compare=False)
    source      : str = ""                         # chemin de la table, pour le descripteur

    def __post_init__(self):
        require(self.kind in ("flat", "parametric", "tabulated"), f"type de référence inconnu : '{self.kind}'")
        if self.kind == "parametric":
            require(self.family is not None, "référence paramétrique sans famille")
        if self.kind == "tabulated":
            grid = np.asarray(self.table_grid, dtype=float).ravel()
            values = np.asarray(self.table_values, dtype=float).ravel()
            require(grid.size >= 2 and grid.size == values.size, "table de référence : au moins 2 points (θ, r)")
            require(bool(np.all(np.isfinite(grid))) and bool(np.all(np.isfinite(values))),
                    "table de référence : valeurs non finies")
            require(bool(np.all(np.diff(grid) > 0)), "table de référence : θ non strictement croissant")
            require(bool(np.all(values > 0)), "table de référence : valeurs r(θ) non strictement positives")
            grid.setflags(write=False)
            values.setflags(write=False)
            object.__setattr__(self, "table_grid", grid)
            object.__setattr__(self, "table_values", values)

    # --- Constructeurs ------------------------------------------------

    @classmethod
    def flat(cls) -> "ReferenceFunction":
        return cls("flat")

    @classmethod
    def parametric(cls, family: DensityFamily) -> "ReferenceFunction":
        if family.family == "flat":
            return cls.flat()
        return cls("parametric", family=family)

    @classmethod
    def tabulated(cls, grid, values, source: str = "") -> "ReferenceFunction":
        return cls("tabulated", table_grid=grid, table_values=values, source=source)

    # --- Évaluation ---------------------------------------------------

    @property
    def is_flat(self) -> bool:
        return self.kind == "flat"

    def covers(self, lo: float, hi: float) -> bool:
        """Vrai si [lo, hi] est dans le domaine d'évaluation."""
        if self.kind != "tabulated":
            return True
        return bool(self.table_grid[0] <= lo and hi <= self.table_grid[-1])

    def __call__(self, theta: ArrayLike) -> ArrayLike:
        """r(θ) ; NaN hors de la table pour une référence tabulée."""
        if self.kind == "flat":
            t = np.asarray(theta, dtype=float)
            return 1.0 if t.ndim == 0 else np.ones_like(t)
        if self.kind == "parametric":
            return density_eval(self.family, theta)
        valeurs = np.interp(theta, self.table_grid, self.table_values, left=np.nan, right=np.nan)
        return float(valeurs) if np.ndim(valeurs) == 0 else valeurs

    # --- Affichage ----------------------------------------------------

    def describe(self) -> str:
        if self.kind == "flat":
            return "flat"
        if self.kind == "parametric":
            return self.family.describe()
        return f"table:{self.source or 'inline'}"

    @property
    def summary_label(self) -> str:
        """Libellé du résumé texte : 'Flat' ou 'User-defined'."""
        return "Flat" if self.is_flat else "User-defined"


def parse_reference(descriptor: Optional[str]) -> ReferenceFunction:
    """
    Convertit un descripteur texte en ReferenceFunction.

    Raises:
        DomainError: descripteur mal formé ou paramètres invalides.
        InputError:  table introuvable ou illisible (référence 'table:').
    """
    if descriptor is None or not descriptor.strip() or descriptor.strip().lower() == "flat":
        return ReferenceFunction.flat()

    texte = descriptor.strip()
    famille, sep, reste = texte.partition(":")
    famille = famille.strip().lower()

    if famille == "table":
        require(bool(sep and reste.strip()), "descripteur 'table:' sans chemin")
        from fbst.data.draws_loader import load_reference_table
        return load_reference_table(reste.strip())

    require(famille in FAMILY_PARAMS, f"famille de référence inconnue : '{famille}'")

    params: dict[str, float] = {}
    if reste.strip():
        for morceau in reste.split(","):
            nom, egal, valeur = morceau.partition("=")
            nom = nom.strip()
            require(bool(egal and nom), f"paramètre mal formé : '{morceau.strip()}' (attendu nom=valeur)")
            require(nom not in params, f"paramètre répété : '{nom}'")
            try:
                params[nom] = float(valeur)
            except ValueError:
                raise DomainError(f"valeur non numérique pour '{nom}' : '{valeur.strip()}'") from None
            require(math.isfinite(params[nom]), f"valeur non finie pour '{nom}'")

    ref = ReferenceFunction.parametric(DensityFamily(famille, params))
    logger.debug("Référence '%s' → %s", descriptor, ref.describe())
    return ref
