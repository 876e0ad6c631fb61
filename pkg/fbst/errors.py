"""
errors.py
─────────
Hiérarchie d'exceptions du package.
Chaque classe porte le code de sortie utilisé par le CLI.
"""


class FBSTError(Exception):
    """Erreur de base de tout le package."""
    exit_code = 3


class DomainError(FBSTError, ValueError):
    """Argument hors du domaine de définition (a ≤ 0, p ≥ 1, x < 0…)."""
    exit_code = 3


class DimensionError(DomainError):
    """Dimensions incohérentes : h ≥ k ou points de tailles différentes."""
    exit_code = 3


class InputError(FBSTError):
    """Fichier absent, illisible, colonne introuvable ou valeur non finie."""
    exit_code = 2


class NumericalError(FBSTError, ArithmeticError):
    """Calcul impossible : référence nulle, dispersion nulle, réglage MCMC raté."""
    exit_code = 3


class OutputError(FBSTError, OSError):
    """Échec d'écriture d'un résultat ou d'un graphique."""
    exit_code = 4


class UsageError(FBSTError):
    """Configuration CLI invalide."""
    exit_code = 1


def require(condition: bool, message: str, exc: type = DomainError) -> None:
    """Lève `exc(message)` si la condition n'est pas remplie."""
    if not condition:
        raise exc(message)
