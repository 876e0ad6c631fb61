"""
fbst_cli.py
───────────
Interface en ligne de commande du Full Bayesian Significance Test.
3 sous-commandes :
  - test      : e-value, p-value et e-value standardisée d'un fichier de tirages
  - plot      : figure SVG de la surprise et de l'ensemble tangentiel
  - selfcheck : vérifie l'installation sur les oracles intégrés

Usage :
  python fbst_cli.py test --draws d.csv --column delta --null 0 --dim-theta 3 --dim-null 2
  python fbst_cli.py test --draws d.csv --column delta --null 0 --dim-theta 3 --dim-null 2 \\
                          --ref cauchy:location=0,scale=0.7071
  python fbst_cli.py plot --draws d.csv --null 0 --dim-theta 3 --dim-null 2 --out p.svg --right-boundary 0
  python fbst_cli.py selfcheck

Codes de sortie : 0 succès, 1 usage, 2 entrée, 3 calcul, 4 écriture, 5 selfcheck en échec.
"""

import argparse
import logging
import math
import sys
from dataclasses import dataclass, field
from typing import Callable, Optional

from colorama import Fore, Style

from fbst import config
from fbst.core.engine import fbst, fbst_density
from fbst.core.evalue import check_dimensions, standardized_evalue
from fbst.core.reference import ReferenceFunction, parse_reference
from fbst.data.draws_loader import FORMATS, DrawsFileSpec, load_draws
from fbst.density.kde import DensityEstimate
from fbst.errors import DomainError, FBSTError, UsageError, require
from fbst.maths.special_math import chisq_cdf, chisq_quantile
from fbst.oracle.analytic import AnalyticPosterior, analytic_evalue_flat
from fbst.oracle.brute_force import brute_force_evalue
from fbst.output.result_writer import OUTPUT_FORMATS, ResultDocument, render_result, write_result
from fbst.output.svg_plotter import PlotSpec, render_fbst_plot, write_svg

logger = logging.getLogger("fbst.cli")

EXIT_SELFCHECK_FAILED = 5

# ──────────────────────────────────────────────────
# FIXTURES DU SELFCHECK
# ──────────────────────────────────────────────────

# (ēv, k, h, sev attendue) : valeurs de référence à 7 chiffres
SEV_FIXTURES = [
    (0.8305998, 3, 2, 0.0248695),
    (0.9032063, 3, 2, 0.01189972),
    (0.9859827, 3, 2, 0.001123303),
    (0.9758885, 8, 7, 2.672151e-05),
]
SEV_REL_TOL = 1e-3

ORACLE_MEANS    = (0.5, 1.0, 1.5, 2.0)
ORACLE_DRAWS    = 200_000
ORACLE_ABS_TOL  = 0.01
BRUTE_ABS_TOL   = 5e-3
CHISQ_DFS       = (1, 2, 3, 7, 8, 50)
CHISQ_TOL       = 1e-10


@dataclass(frozen=True)
class CliConfig:
    subcommand   : str
    draws        : Optional[DrawsFileSpec] = None
    null_value   : float = 0.0
    dim_theta    : int = 1
    dim_null     : int = 0
    ref          : ReferenceFunction = field(default_factory=ReferenceFunction.flat)
    estimator    : str = "grid"
    bandwidth    : Optional[float] = None
    grid_size    : int = config.DEFAULT_GRID_SIZE
    output       : Optional[str] = None
    output_format: str = "text"
    plot         : PlotSpec = field(default_factory=PlotSpec)
    verbose      : bool = False


class _ArgumentParser(argparse.ArgumentParser):
    """argparse lève UsageError (code 1) au lieu de quitter avec le code 2."""

    def error(self, message: str):
        raise UsageError(message)


# ══════════════════════════════════════════════════════════════════════
# ARGUMENTS
# ══════════════════════════════════════════════════════════════════════

def _add_test_arguments(p: argparse.ArgumentParser) -> None:
    p.add_argument("--draws", required=True, help="Fichier de tirages a posteriori")
    p.add_argument("--draws-format", choices=FORMATS, default=None,
                   help="Format du fichier (déduit du suffixe par défaut)")
    p.add_argument("--column", default=None, help="Colonne des tirages (nom ou index)")
    p.add_argument("--delimiter", default=None, help="Séparateur CSV (tabulation pour .tsv, virgule sinon)")
    p.add_argument("--null", dest="null_value", type=float, required=True, help="Valeur θ₀ de H₀")
    p.add_argument("--dim-theta", type=int, required=True, help="Dimension k de l'espace des paramètres")
    p.add_argument("--dim-null", type=int, required=True, help="Dimension h de l'ensemble nul")
    p.add_argument("--ref", default="flat",
                   help="Référence : flat, normal:mean=0,sd=1, cauchy:location=0,scale=0.7071, "
                        "student_t:location=0,scale=1,df=3, table:<chemin>")
    p.add_argument("--estimator", choices=["grid", "mc"], default="grid", help="Estimateur de ēv")
    p.add_argument("--bandwidth", type=float, default=None, help="Largeur de bande KDE (Silverman par défaut)")
    p.add_argument("--grid-size", type=int, default=None,
                   help=f"Points de grille (défaut FBST_GRID_SIZE ou {config.DEFAULT_GRID_SIZE})")
    p.add_argument("--verbose", "-v", action="store_true", help="Journalisation DEBUG")


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(
        prog="fbst",
        description="Full Bayesian Significance Test — tirages a posteriori → e-value",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Exemples :
  python fbst_cli.py test --draws d.csv --column delta --null 0 --dim-theta 3 --dim-null 2
  python fbst_cli.py plot --draws d.csv --null 0 --dim-theta 3 --dim-null 2 --out p.svg
  python fbst_cli.py selfcheck
        """,
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p_test = sub.add_parser("test", help="Calcule ēv, pv₀ et sev")
    _add_test_arguments(p_test)
    p_test.add_argument("--out", "--output", dest="output", default=None,
                        help="Fichier de sortie (stdout par défaut)")
    p_test.add_argument("--output-format", choices=OUTPUT_FORMATS, default="text")

    p_plot = sub.add_parser("plot", help="Figure SVG")
    _add_test_arguments(p_plot)
    p_plot.add_argument("--out", "--output", dest="output", required=True, help="Fichier SVG")
    p_plot.add_argument("--left-boundary", type=float, default=None)
    p_plot.add_argument("--right-boundary", type=float, default=None)
    p_plot.add_argument("--width", type=int, default=config.PLOT_WIDTH)
    p_plot.add_argument("--height", type=int, default=config.PLOT_HEIGHT)
    p_plot.add_argument("--no-cutoff-line", action="store_true", help="Masquer la ligne horizontale à s*")
    p_plot.add_argument("--color-tangential", default=config.COLOR_TANGENTIAL)
    p_plot.add_argument("--color-complement", default=config.COLOR_COMPLEMENT)

    p_check = sub.add_parser("selfcheck", help="Vérifie les oracles intégrés")
    p_check.add_argument("--verbose", "-v", action="store_true")

    return parser


def build_config(args: argparse.Namespace) -> CliConfig:
    """
    Valide les arguments et construit la configuration.

    Raises:
        UsageError: dimensions, référence, largeur de bande ou grille invalides.
        InputError: table de référence illisible.
    """
    if args.subcommand == "selfcheck":
        return CliConfig(subcommand="selfcheck", verbose=args.verbose)

    try:
        check_dimensions(args.dim_theta, args.dim_null)
        ref = parse_reference(args.ref)
    except DomainError as exc:
        raise UsageError(str(exc)) from None

    require(math.isfinite(args.null_value), f"--null doit être un nombre fini (reçu {args.null_value})", UsageError)
    require(args.bandwidth is None or args.bandwidth > 0,
            f"--bandwidth doit être > 0 (reçu {args.bandwidth})", UsageError)
    grid_size = args.grid_size if args.grid_size is not None else config.grid_size_from_env()
    require(grid_size >= config.MIN_GRID_SIZE,
            f"--grid-size doit être ≥ {config.MIN_GRID_SIZE} (reçu {grid_size})", UsageError)

    draws = DrawsFileSpec(path=args.draws, format=args.draws_format,
                          column=args.column, delimiter=args.delimiter)

    plot = PlotSpec()
    if args.subcommand == "plot":
        plot = PlotSpec(
            width_px=args.width,
            height_px=args.height,
            left_boundary=args.left_boundary,
            right_boundary=args.right_boundary,
            color_tangential=args.color_tangential,
            color_complement=args.color_complement,
            show_cutoff_line=not args.no_cutoff_line,
        )

    return CliConfig(
        subcommand=args.subcommand,
        draws=draws,
        null_value=args.null_value,
        dim_theta=args.dim_theta,
        dim_null=args.dim_null,
        ref=ref,
        estimator="monte_carlo" if args.estimator == "mc" else "grid",
        bandwidth=args.bandwidth,
        grid_size=grid_size,
        output=args.output,
        output_format=getattr(args, "output_format", "text"),
        plot=plot,
        verbose=args.verbose,
    )


# ══════════════════════════════════════════════════════════════════════
# SOUS-COMMANDES
# ══════════════════════════════════════════════════════════════════════

def _run_fbst(cfg: CliConfig):
    sample = load_draws(cfg.draws)
    return fbst(sample, cfg.null_value, cfg.ref,
                k=cfg.dim_theta, h=cfg.dim_null,
                estimator=cfg.estimator, bandwidth=cfg.bandwidth, grid_size=cfg.grid_size)


def run_test(cfg: CliConfig) -> int:
    """Résumé texte (ou json) sur stdout, ou dans --out."""
    result = _run_fbst(cfg)
    doc = ResultDocument.from_result(result)
    if cfg.output:
        write_result(doc, cfg.output, cfg.output_format)
    else:
        sys.stdout.write(render_result(doc, cfg.output_format))
        sys.stdout.flush()
    return 0


def run_plot(cfg: CliConfig) -> int:
    require(bool(cfg.output), "--out est requis pour plot", UsageError)
    result = _run_fbst(cfg)
    svg = render_fbst_plot(result.surprise, result.region, cfg.plot, x_label=result.label)
    write_svg(svg, cfg.output)
    return 0


def _selfcheck_fixtures() -> list[tuple[str, Callable[[], tuple[bool, str]]]]:
    """(description, vérification) ; chaque vérification renvoie (succès, détail)."""
    fixtures = []

    for ev, k, h, attendu in SEV_FIXTURES:
        def check(ev=ev, k=k, h=h, attendu=attendu):
            calcule = standardized_evalue(ev, k, h).sev
            return abs(calcule - attendu) <= SEV_REL_TOL * attendu, f"calculé {calcule:.7g}"
        fixtures.append((f"(ev̄={ev:.7g},k={k},h={h}) → {attendu:.7g}", check))

    for mu in ORACLE_MEANS:
        post = AnalyticPosterior(mu, 1.0)
        exact = analytic_evalue_flat(post, 0.0)

        def check(post=post, exact=exact):
            sample = post.sample(ORACLE_DRAWS, seed=0)
            grille = fbst(sample, 0.0, k=1, h=0).e_value_against
            mc = fbst(sample, 0.0, k=1, h=0, estimator="monte_carlo").e_value_against
            ok = abs(grille - exact) < ORACLE_ABS_TOL and abs(mc - exact) < ORACLE_ABS_TOL
            return ok, f"grille {grille:.4f}, mc {mc:.4f}"
        fixtures.append((f"N({mu:g},1) vs θ₀=0 → {exact:.4f}", check))

    def check_chisq():
        ecart = max(abs(chisq_cdf(chisq_quantile(p, df), df) - p)
                    for df in CHISQ_DFS for p in (0.01, 0.5, 0.95, 0.999))
        return ecart < CHISQ_TOL, f"écart max {ecart:.2e}"
    fixtures.append((f"χ² quantile/cdf df∈{{{','.join(map(str, CHISQ_DFS))}}}", check_chisq))

    def check_brute():
        post = AnalyticPosterior(0.5, 1.0)
        dens = DensityEstimate.from_function(post.pdf, -7.5, 8.5)
        grille = fbst_density(dens, 0.0, k=1, h=0).e_value_against
        brut = brute_force_evalue(post.pdf, None, 0.0, -7.5, 8.5)
        return abs(grille - brut) < BRUTE_ABS_TOL, f"grille {grille:.5f}, brute force {brut:.5f}"
    fixtures.append(("N(0.5,1) grille vs brute force", check_brute))

    return fixtures


def _paint(texte: str, couleur: str) -> str:
    return f"{couleur}{texte}{Style.RESET_ALL}" if sys.stdout.isatty() else texte


def run_selfcheck() -> int:
    fixtures = _selfcheck_fixtures()
    echecs = 0
    for description, check in fixtures:
        try:
            ok, detail = check()
        except FBSTError as exc:
            ok, detail = False, str(exc)
        echecs += not ok
        statut = _paint("OK", Fore.GREEN) if ok else _paint("ÉCHEC", Fore.RED)
        print(f"[{statut}] {description}  ({detail})")

    print(f"Selfcheck : {len(fixtures) - echecs}/{len(fixtures)} vérifications réussies")
    return 0 if echecs == 0 else EXIT_SELFCHECK_FAILED


# ══════════════════════════════════════════════════════════════════════
# POINT D'ENTRÉE
# ══════════════════════════════════════════════════════════════════════

def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    verbose = False
    try:
        args = parser.parse_args(argv)
        verbose = args.verbose
        config.configure_logging(verbose)
        cfg = build_config(args)

        if cfg.subcommand == "test":
            return run_test(cfg)
        if cfg.subcommand == "plot":
            return run_plot(cfg)
        return run_selfcheck()

    except SystemExit as exc:          # --help
        return int(exc.code or 0)
    except FBSTError as exc:
        if verbose:
            logger.exception("Échec")
        print(f"Erreur : {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
