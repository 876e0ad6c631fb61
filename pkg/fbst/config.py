"""
config.py
─────────
Configuration centrale du package.
Les constantes ci-dessous sont les valeurs par défaut ;
certaines peuvent être surchargées via le fichier .env (voir env.example.txt).
"""

import logging
import os
import sys
from typing import Optional

from dotenv import load_dotenv

from fbst.errors import UsageError

TOOL_NAME    = "fbst"
TOOL_VERSION = "1.0.0"

# ──────────────────────────────────────────────────
# ESTIMATION DE DENSITÉ
# ──────────────────────────────────────────────────

DEFAULT_GRID_SIZE   = 1024      # Points de la grille KDE
MIN_GRID_SIZE       = 128
MIN_DRAWS           = 30        # Plancher dur pour un PosteriorSample
GRID_PAD_BANDWIDTHS = 3.0       # Marge de la grille : 3 largeurs de bande de chaque côté

# Au-delà de ce produit n × grille, la KDE passe par binning linéaire + FFT
DIRECT_KDE_LIMIT    = 20_000_000

# ──────────────────────────────────────────────────
# SORTIES
# ──────────────────────────────────────────────────

PRINT_DIGITS        = 7         # Chiffres significatifs du résumé texte

PLOT_WIDTH          = 800
PLOT_HEIGHT         = 500
COLOR_TANGENTIAL    = "#3b6fd4"   # Bleu : ensemble tangentiel (evidence contre H0)
COLOR_COMPLEMENT    = "#d64541"   # Rouge : complément (evidence en faveur de H0)

# ──────────────────────────────────────────────────
# ÉCHANTILLONNEUR METROPOLIS (oracle de test)
# ──────────────────────────────────────────────────

BURN_IN_FRACTION    = 0.10
MIN_ITERATIONS      = 100_000
TARGET_ACCEPTANCE   = (0.20, 0.50)   # Visée pendant le burn-in
VALID_ACCEPTANCE    = (0.10, 0.70)   # Au-delà → NumericalError

LOG_FORMAT = "%(asctime)s [%(levelname)s] %(name)s — %(message)s"


def grid_size_from_env(default: int = DEFAULT_GRID_SIZE) -> int:
    """
    Lit FBST_GRID_SIZE dans l'environnement (après load_dotenv).
    Une valeur illisible est ignorée avec un avertissement.
    """
    raw = os.getenv("FBST_GRID_SIZE", "").strip()
    if not raw:
        return default
    try:
        return int(raw)
    except ValueError:
        logging.getLogger(__name__).warning(
            "FBST_GRID_SIZE illisible ('%s') — valeur par défaut %d utilisée", raw, default
        )
        return default


def fixed_timestamp() -> Optional[str]:
    """Horodatage imposé (FBST_TIMESTAMP) pour des documents json reproductibles."""
    value = os.getenv("FBST_TIMESTAMP", "").strip()
    return value or None


def configure_logging(verbose: bool = False) -> None:
    """
    Configure le logger racine : stderr toujours, fichier si FBST_LOG_FILE.
    stdout reste réservé aux résultats.
    """
    load_dotenv()

    level_name = "DEBUG" if verbose else os.getenv("FBST_LOG_LEVEL", "WARNING").upper()
    level = getattr(logging, level_name, logging.WARNING)

    handlers: list[logging.Handler] = [logging.StreamHandler(sys.stderr)]
    log_file = os.getenv("FBST_LOG_FILE", "").strip()
    if log_file:
        try:
            handlers.append(logging.FileHandler(log_file, encoding="utf-8"))
        except OSError as exc:
            raise UsageError(f"FBST_LOG_FILE inutilisable : {log_file} ({exc.strerror or exc})") from None

    logging.basicConfig(
        level    = level,
        format   = LOG_FORMAT,
        handlers = handlers,
        force    = True,
    )
