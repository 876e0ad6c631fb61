"""
result_writer.py
Sérialisation des résultats FBST : document json complet (relisible sans perte)
et bloc résumé texte à 7 chiffres significatifs.
"""

import json
import logging
from dataclasses import asdict, dataclass, fields
from datetime import datetime, timezone
from pathlib import Path
from typing import Optional, Union

from fbst import config
from fbst.core.engine import FbstResult
from fbst.errors import InputError, OutputError, require

# Journalisation du module
logger = logging.getLogger(__name__)

OUTPUT_FORMATS = ("text", "json")

_HEADER = "Full Bayesian Significance Test for testing a sharp hypothesis against its alternative:"


@dataclass(frozen=True)
class ResultDocument:
    """
    Résultat FBST à plat, prêt pour l'écriture.
    Mêmes champs que FbstResult (hors objets intermédiaires) + version et horodatage.
    """
    e_value_against       : float
    e_value_in_favor      : float
    p_value               : float
    sev_against           : float
    sev                   : float
    dim_theta             : int
    dim_null              : int
    null_value            : float
    reference_descriptor  : str
    estimator             : str
    label                 : str
    sample_size           : int
    bandwidth             : float
    grid_size             : int
    posterior_mode        : float
    posterior_mode_density: float
    null_posterior_density: float
    s_star                : float
    relative_null_ratio   : float
    null_corroborated     : Optional[bool]
    corroborated_mass     : Optional[float]
    tool_version          : str
    timestamp             : str

    @classmethod
    def from_result(cls, result: FbstResult, timestamp: Optional[str] = None) -> "ResultDocument":
        """Horodatage : argument, sinon FBST_TIMESTAMP, sinon l'heure UTC courante."""
        stamp = timestamp or config.fixed_timestamp() or datetime.now(timezone.utc).isoformat(timespec="seconds")
        return cls(**result.to_dict(), tool_version=config.TOOL_VERSION, timestamp=stamp)

    @classmethod
    def from_dict(cls, data: dict) -> "ResultDocument":
        attendus = {f.name for f in fields(cls)}
        manquants = attendus - set(data)
        require(not manquants, f"document incomplet : {', '.join(sorted(manquants))}", InputError)
        return cls(**{nom: data[nom] for nom in attendus})

    def to_dict(self) -> dict:
        return asdict(self)

    @property
    def reference_label(self) -> str:
        return "Flat" if self.reference_descriptor == "flat" else "User-defined"


def _fmt(x: float) -> str:
    return f"{x:.{config.PRINT_DIGITS}g}"


def format_summary(doc: ResultDocument) -> str:
    """Bloc résumé texte, une ligne par résultat, terminé par un saut de ligne."""
    lignes = [
        _HEADER,
        f"Reference function: {doc.reference_label}",
        f"Testing Hypothesis H_0:Parameter= {_fmt(doc.null_value)} against its alternative H_1",
        f"Bayesian e-value against H_0: {_fmt(doc.e_value_against)}",
        f"p-value associated with the Bayesian e-value in favour of the null hypothesis: {_fmt(doc.p_value)}",
        f"Standardized e-value: {_fmt(doc.sev)}",
    ]
    return "\n".join(lignes) + "\n"


def render_result(doc: ResultDocument, format: str = "text") -> str:
    require(format in OUTPUT_FORMATS, f"format de sortie inconnu : '{format}' (text, json)")
    if format == "json":
        return json.dumps(doc.to_dict(), indent=2, ensure_ascii=False) + "\n"
    return format_summary(doc)


def write_result(doc: ResultDocument, path: Union[str, Path], format: str = "text") -> None:
    """
    Écrit le document (UTF-8, fins de ligne LF).

    Raises:
        OutputError: destination non inscriptible.
    """
    contenu = render_result(doc, format)
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(contenu)
    except OSError as exc:
        raise OutputError(f"écriture impossible : {path} — {exc}") from None
    logger.info("Résultat écrit (%s) : %s", format, path)


def read_result(path: Union[str, Path]) -> ResultDocument:
    """Relit un document écrit au format json."""
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise InputError(f"document introuvable : {path}") from None
    except (OSError, json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise InputError(f"document json illisible : {path} — {exc}") from None
    require(isinstance(data, dict), f"{path}: objet json attendu", InputError)
    return ResultDocument.from_dict(data)
