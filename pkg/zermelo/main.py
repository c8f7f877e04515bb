# main.py

"""
Command-line front end of zermelo.

    python -m zermelo.main [--config settings.yaml] [--seed N] <command> ...

Commands: classify, verify, normal-form, geodesic, moduli, examples. Results are
printed as JSON (CSV for trajectories). Exit codes: 0 success, 2 invalid input,
3 numerical failure.
"""

import argparse
import sys
from typing import List, Optional
import numpy as np
from zermelo.config import ConfigManager, setup_logging
from zermelo.errors import ValidationError, VerificationFailure, ZermeloError
from zermelo.models.catalog import get_example, list_examples
from zermelo.models.classifier import classify, moduli_dimension, verify_spec
from zermelo.models.geodesics import geodesic_ivp, shortest_time
from zermelo.models.navigation import NavigationMetric
from zermelo.models.normal_forms import euclidean_normal_form, lorentz_normal_form, skew_normal_form
from zermelo.models.space_form import SpaceFormFactory
from zermelo.models.wind import WindSpec
from zermelo.utils.json_utils import get_json_string, load_matrix_file, load_spec_file, spec_to_dict

EXIT_OK = 0
EXIT_INPUT = 2


def _vector(text: str) -> np.ndarray:
    try:
        return np.array([float(part) for part in text.split(",")])
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="zermelo",
        description="Zermelo navigation and constant flag curvature Randers metrics.",
    )
    parser.add_argument("--config", type=str, default=None, help="Path to a settings.yaml overriding the defaults")
    parser.add_argument("--seed", type=int, default=None, help="Seed of every random choice (default from settings)")
    commands = parser.add_subparsers(dest="command", required=True)

    classify_parser = commands.add_parser("classify", help="Moduli point of the navigation metric of a spec file")
    classify_parser.add_argument("spec", help="Spec JSON file")

    verify_parser = commands.add_parser("verify", help="Numerically verify constant flag curvature")
    verify_parser.add_argument("spec", help="Spec JSON file")
    verify_parser.add_argument("--samples", type=int, default=None)
    verify_parser.add_argument("--tol", type=float, default=None)

    normal_parser = commands.add_parser("normal-form", help="Adjoint-orbit normal form of a matrix")
    normal_parser.add_argument("--algebra", choices=["o", "e", "o1n"], required=True)
    normal_parser.add_argument("matrix", help="JSON file holding the matrix")

    geodesic_parser = commands.add_parser("geodesic", help="Integrate a geodesic or shoot between two points")
    geodesic_parser.add_argument("spec", help="Spec JSON file")
    geodesic_parser.add_argument("--x0", type=_vector, required=True, help="Start point, e.g. 0.1,0,0")
    geodesic_parser.add_argument("--y0", type=_vector, default=None, help="Initial velocity")
    geodesic_parser.add_argument("--goal", type=_vector, default=None, help="Goal point for shortest-time shooting")
    geodesic_parser.add_argument("--t", type=float, default=None, help="Integration time")
    geodesic_parser.add_argument("--dt", type=float, default=None, help="Step size")
    geodesic_parser.add_argument("--out", type=str, default=None, help="CSV output path (stdout if omitted)")

    moduli_parser = commands.add_parser("moduli", help="Dimension of the moduli space")
    moduli_parser.add_argument("--n", type=int, required=True)
    moduli_parser.add_argument("--K-sign", dest="k_sign", choices=["pos", "zero", "neg"], required=True)
    moduli_parser.add_argument("--sigma-nonzero", action="store_true")

    examples_parser = commands.add_parser("examples", help="List the example catalog or materialize one spec")
    examples_parser.add_argument("--id", dest="example_id", default=None)
    return parser


def cmd_classify(args, config: ConfigManager) -> int:
    spec = load_spec_file(args.spec).spec
    point = classify(
        spec,
        tol_eig=config.get_config("numerics.tol_eig"),
        tol_recon=config.get_config("numerics.tol_recon"),
        kernel_rtol=config.get_config("numerics.kernel_rtol"),
    )
    print(get_json_string(point.to_dict()))
    return EXIT_OK


def cmd_verify(args, config: ConfigManager) -> int:
    spec_file = load_spec_file(args.spec)
    sample = spec_file.sample or {}
    report = verify_spec(
        spec_file.spec,
        rng=np.random.default_rng(args.seed),
        samples=args.samples or config.get_config("verify.samples"),
        tol=args.tol or config.get_config("verify.tol"),
        expect=spec_file.expect,
        center=sample.get("center"),
        radius=sample.get("radius", config.get_config("verify.sample_radius")),
        min_margin=config.get_config("verify.min_margin"),
        fd_step=config.get_config("numerics.fd_step"),
        spray_step=config.get_config("numerics.spray_step"),
        tol_eig=config.get_config("numerics.tol_eig"),
    )
    print(get_json_string(report.to_dict()))
    if not report.passed:
        raise VerificationFailure(
            f"verification failed, worst check {report.worst} = {report.checks[report.worst]:.3e}"
        )
    return EXIT_OK


def cmd_normal_form(args, config: ConfigManager) -> int:
    omega = load_matrix_file(args.matrix)
    tol_eig = config.get_config("numerics.tol_eig")
    if args.algebra == "o":
        form = skew_normal_form(omega, tol_eig=tol_eig)
    elif args.algebra == "o1n":
        form = lorentz_normal_form(
            omega,
            tol_eig=tol_eig,
            tol_recon=config.get_config("numerics.tol_recon"),
            kernel_rtol=config.get_config("numerics.kernel_rtol"),
        )
    else:
        model = SpaceFormFactory.create_model("euclidean", 0.0, omega.shape[0] - 1)
        spec = WindSpec.from_embedding(model, omega)
        form = euclidean_normal_form(spec.Q, spec.C, spec.sigma, tol_eig=tol_eig)
    print(get_json_string(form.to_dict(omega)))
    return EXIT_OK


def cmd_geodesic(args, config: ConfigManager) -> int:
    spec = load_spec_file(args.spec).spec
    metric = NavigationMetric(spec)
    step = config.get_config("numerics.fd_step")
    if args.goal is not None:
        direction, arrival = shortest_time(
            metric,
            args.x0,
            args.goal,
            tol_pos=config.get_config("geodesic.tol_pos"),
            budget=config.get_config("geodesic.shooting_budget"),
            step=step,
        )
        print(get_json_string({"direction": direction, "time": arrival}))
        return EXIT_OK
    if args.y0 is None:
        raise ValidationError("geodesic needs --y0 (or --goal for shooting)")
    trajectory = geodesic_ivp(
        metric,
        args.x0,
        args.y0,
        t_end=args.t or config.get_config("geodesic.t_end"),
        dt=args.dt or config.get_config("geodesic.dt"),
        step=step,
    )
    text = trajectory.to_csv(args.out)
    if text is not None:
        sys.stdout.write(text)
    if trajectory.exited:
        print(f"warning: trajectory left the strongly convex domain at t = {trajectory.times[-1]:.6g}", file=sys.stderr)
    return EXIT_OK


def cmd_moduli(args, config: ConfigManager) -> int:
    print(moduli_dimension(args.n, args.k_sign, args.sigma_nonzero))
    return EXIT_OK


def cmd_examples(args, config: ConfigManager) -> int:
    if args.example_id is None:
        for example_id in list_examples():
            print(f"{example_id}\t{get_example(example_id).description}")
        return EXIT_OK
    example = get_example(args.example_id)
    spec = example.build()
    point = classify(spec, require_local=False, tol_eig=config.get_config("numerics.tol_eig"))
    sample = {"radius": example.sample_radius}
    if example.sample_center is not None:
        sample["center"] = list(example.sample_center)
    expect = {"K": example.expected_K, "a": point.a, "case": point.case}
    print(get_json_string(spec_to_dict(spec, expect=expect, sample=sample, example_id=example.example_id)))
    return EXIT_OK


COMMANDS = {
    "classify": cmd_classify,
    "verify": cmd_verify,
    "normal-form": cmd_normal_form,
    "geodesic": cmd_geodesic,
    "moduli": cmd_moduli,
    "examples": cmd_examples,
}


def main(argv: Optional[List[str]] = None) -> int:
    """
    Parse arguments, run one command and return its exit code.
    """
    args = build_parser().parse_args(argv)
    config = ConfigManager(config_path=args.config)
    setup_logging(config.get_config("logging.level", "WARNING"), config.get_config("logging.file", ""))
    if args.seed is None:
        args.seed = config.get_config("sampling.seed", 0)
    try:
        return COMMANDS[args.command](args, config)
    except ZermeloError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
