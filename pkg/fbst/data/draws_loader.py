"""
draws_loader.py
===============
Lecture des tirages a posteriori depuis des fichiers (csv, json, texte brut)
et des tables de référence tabulées (θ, r(θ)).

Formats acceptés :
    csv   : en-tête obligatoire, colonne choisie par nom ou par index
    json  : tableau de nombres, ou objet {nom: [nombres]} + colonne
    plain : un nombre par ligne

Les numéros de ligne des messages d'erreur sont ceux du fichier
(l'en-tête CSV est la ligne 1). Fin de ligne LF ou CRLF.
"""

import json
import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Union

import pandas as pd

from fbst.core.reference import ReferenceFunction
from fbst.density.kde import PosteriorSample
from fbst.errors import DomainError, InputError, require

logger = logging.getLogger(__name__)

FORMATS = ("csv", "json", "plain")

# Suffixe → format déduit
_SUFFIX_FORMATS = {
    ".csv":  "csv",
    ".tsv":  "csv",
    ".json": "json",
    ".txt":  "plain",
    ".dat":  "plain",
}


@dataclass(frozen=True)
class DrawsFileSpec:
    path     : str
    format   : Optional[str] = None                 # None → déduit du suffixe
    column   : Optional[Union[str, int]] = None     # csv / json objet
    delimiter: Optional[str] = None                 # None → tabulation pour .tsv, virgule sinon

    def __post_init__(self):
        suffixe = Path(self.path).suffix.lower()
        fmt = self.format or _SUFFIX_FORMATS.get(suffixe, "csv")
        if self.delimiter is None:
            object.__setattr__(self, "delimiter", "\t" if suffixe == ".tsv" else ",")
        require(fmt in FORMATS, f"format de tirages inconnu : '{fmt}' (csv, json, plain)", InputError)
        require(len(self.delimiter) == 1, f"séparateur invalide : '{self.delimiter}'", InputError)
        object.__setattr__(self, "format", fmt)


# ══════════════════════════════════════════════════════════════════════
# Conversion valeur par valeur
# ══════════════════════════════════════════════════════════════════════

def _to_float(raw: object, where: str, path: Path) -> float:
    """Convertit une valeur brute ; erreurs localisées (ligne / élément)."""
    if isinstance(raw, bool):
        raise InputError(f"{path}: {where} : booléen au lieu d'un nombre")
    texte = raw.strip() if isinstance(raw, str) else raw
    if texte == "" or texte is None:
        raise InputError(f"{path}: {where} : valeur manquante")
    try:
        valeur = float(texte)
    except (TypeError, ValueError):
        raise InputError(f"{path}: {where} : valeur non numérique '{texte}'") from None
    if not math.isfinite(valeur):
        raise InputError(f"{path}: {where} : valeur non finie '{texte}'")
    return valeur


def _read_csv(path: Path, delimiter: str) -> pd.DataFrame:
    try:
        frame = pd.read_csv(
            path,
            sep=delimiter,
            dtype=str,
            keep_default_na=False,
            skip_blank_lines=False,
            encoding="utf-8",
        )
    except pd.errors.EmptyDataError:
        raise InputError(f"{path}: fichier vide") from None
    except (pd.errors.ParserError, UnicodeDecodeError) as exc:
        raise InputError(f"{path}: erreur de lecture CSV — {exc}") from None
    except OSError as exc:
        raise InputError(f"{path}: lecture impossible — {exc.strerror or exc}") from None
    frame.columns = [str(c).strip() for c in frame.columns]
    return frame.fillna("")


def _resolve_column(columns: list[str], column: Optional[Union[str, int]], path: Path) -> str:
    """Nom de colonne, index (entier ou chaîne de chiffres), ou unique colonne."""
    if column is None:
        require(len(columns) == 1,
                f"{path}: {len(columns)} colonnes ({', '.join(columns)}) — préciser la colonne", InputError)
        return columns[0]
    if isinstance(column, str) and column.strip() in columns:
        return column.strip()
    if isinstance(column, int) or (isinstance(column, str) and column.strip().isdigit()):
        index = int(column)
        require(0 <= index < len(columns), f"{path}: index de colonne {index} hors limites", InputError)
        return columns[index]
    raise InputError(f"{path}: colonne introuvable : '{column}' (colonnes : {', '.join(columns)})")


def _load_csv(spec: DrawsFileSpec, path: Path) -> tuple[list[float], str]:
    frame = _read_csv(path, spec.delimiter)
    nom = _resolve_column(list(frame.columns), spec.column, path)

    valeurs: list[float] = []
    for position, (brut, ligne_entiere) in enumerate(zip(frame[nom], frame.itertuples(index=False))):
        if all(str(v).strip() == "" for v in ligne_entiere):
            continue                                   # ligne blanche
        valeurs.append(_to_float(brut, f"ligne {position + 2}", path))
    return valeurs, nom


def _load_plain(path: Path) -> tuple[list[float], str]:
    try:
        lignes = path.read_text(encoding="utf-8").splitlines()
    except UnicodeDecodeError as exc:
        raise InputError(f"{path}: encodage non UTF-8 — {exc}") from None
    except OSError as exc:
        raise InputError(f"{path}: lecture impossible — {exc.strerror or exc}") from None

    valeurs = [_to_float(l, f"ligne {i}", path) for i, l in enumerate(lignes, start=1) if l.strip()]
    return valeurs, path.stem


def _load_json(spec: DrawsFileSpec, path: Path) -> tuple[list[float], str]:
    try:
        contenu = json.loads(path.read_text(encoding="utf-8"))
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise InputError(f"{path}: JSON invalide — {exc}") from None
    except OSError as exc:
        raise InputError(f"{path}: lecture impossible — {exc.strerror or exc}") from None

    if isinstance(contenu, list):
        tableau, label = contenu, path.stem
    elif isinstance(contenu, dict):
        cles = [str(c) for c in contenu]
        label = _resolve_column(cles, spec.column, path)
        tableau = contenu[label]
        require(isinstance(tableau, list), f"{path}: '{label}' n'est pas un tableau", InputError)
    else:
        raise InputError(f"{path}: JSON attendu : tableau de nombres ou objet de tableaux")

    valeurs = [_to_float(v, f"élément {i}", path) for i, v in enumerate(tableau)]
    return valeurs, label


# ══════════════════════════════════════════════════════════════════════
# API publique
# ══════════════════════════════════════════════════════════════════════

def load_draws(spec: DrawsFileSpec) -> PosteriorSample:
    """
    Charge les tirages décrits par `spec`.

    Raises:
        InputError: fichier absent, erreur de lecture (avec numéro de ligne),
                    colonne introuvable, valeur non finie, colonne vide ou trop courte.
    """
    path = Path(spec.path)
    if not path.is_file():
        raise InputError(f"fichier de tirages introuvable : {path}")

    if spec.format == "csv":
        valeurs, label = _load_csv(spec, path)
    elif spec.format == "json":
        valeurs, label = _load_json(spec, path)
    else:
        valeurs, label = _load_plain(path)

    require(len(valeurs) > 0, f"{path}: colonne '{label}' vide", InputError)
    logger.debug("Tirages chargés : %s (%s, colonne '%s') — %d valeurs", path, spec.format, label, len(valeurs))
    return PosteriorSample(valeurs, label or path.stem)


def load_reference_table(path: Union[str, Path], delimiter: str = ",") -> ReferenceFunction:
    """
    Table de référence à deux colonnes (theta, value), en-tête obligatoire.
    Les colonnes nommées 'theta' et 'value' sont prises si présentes,
    sinon les deux premières.
    """
    path = Path(path)
    if not path.is_file():
        raise InputError(f"table de référence introuvable : {path}")

    frame = _read_csv(path, delimiter)
    colonnes = list(frame.columns)
    if "theta" in colonnes and "value" in colonnes:
        col_theta, col_valeur = "theta", "value"
    else:
        require(len(colonnes) >= 2, f"{path}: deux colonnes attendues (theta, value)", InputError)
        col_theta, col_valeur = colonnes[0], colonnes[1]

    grid: list[float] = []
    values: list[float] = []
    for position, (t, v) in enumerate(zip(frame[col_theta], frame[col_valeur])):
        if str(t).strip() == "" and str(v).strip() == "":
            continue
        grid.append(_to_float(t, f"ligne {position + 2}", path))
        values.append(_to_float(v, f"ligne {position + 2}", path))

    try:
        ref = ReferenceFunction.tabulated(grid, values, source=str(path))
    except DomainError as exc:
        raise InputError(f"{path}: {exc}") from None

    logger.debug("Table de référence chargée : %s — %d points sur [%g, %g]", path, len(grid), grid[0], grid[-1])
    return ref
