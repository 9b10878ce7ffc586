import argparse
import logging
import os
import sys
from dataclasses import dataclass, field

from config import integrator_settings, load_config, setup_logging, verify_options
from expr import ExpressionError, print_expression
from integrate import REPARAMETERIZED, IntegrationError, integrate_fixed, reconstruct_time
from mech import MechanicsError
from models import MODEL_FILES, ModelError, build_model, catalog_names, load_model, load_model_file, promoted_model
from reduce import ReductionError, full_to_reduced_map
from verify import VerificationHarness, full_flow, mapped_initial, reduced_flow, run

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_INPUT = 2
EXIT_RUNTIME = 3

INPUT_ERRORS = (ModelError, ExpressionError, MechanicsError, ReductionError)


@dataclass
class RunConfig:
    command: str
    model: str = None
    file: str = None
    t_end: float = None
    dt: float = None
    rel_tol: float = None
    abs_tol: float = None
    output: str = None
    format: str = "csv"
    reduced: bool = False
    co_integrate_time: bool = False
    enforce_zero_energy: bool = False
    promote_energy: int = 0
    promote_coupling: list = field(default_factory=list)
    seed: int = None

    def validate(self):
        if self.command != "list" and (self.model is None) == (self.file is None):
            raise ModelError("Give exactly one of --model or --file")
        if self.format not in ("csv", "json"):
            raise ModelError(f"Unknown output format '{self.format}'")


def build_parser():
    parser = argparse.ArgumentParser(description="Contact reduction of higher-order Lagrangian systems")
    commands = parser.add_subparsers(dest="command", required=True)

    commands.add_parser("list", help="List catalogued models and bundled model files")
    for name, text in (("reduce", "Print the reduced objects of a model"),
                       ("simulate", "Integrate a model and write the trajectory"),
                       ("verify", "Run the verification suite of a model")):
        sub = commands.add_parser(name, help=text)
        source = sub.add_mutually_exclusive_group(required=True)
        source.add_argument("--model", help="Catalog name (see 'list')")
        source.add_argument("--file", help="Path to a model file")
        sub.add_argument("--output", help="Output file (default: output directory from the config)")
        sub.add_argument("--format", choices=("csv", "json"), default="csv")
        sub.add_argument("--promote-energy", type=int, choices=(1, -1), default=0, metavar="SIGN",
                         help="Promote the energy constant with sign +1 or -1")
        sub.add_argument("--promote-coupling", action="append", default=[], metavar="NAME",
                         help="Promote a coupling constant to a constant-velocity coordinate (repeatable)")
        sub.add_argument("--seed", type=int, help="Seed for sampling-based equivalence")
        if name in ("simulate", "verify"):
            sub.add_argument("--t-end", type=float, help="Integration horizon (default: the model's)")
            sub.add_argument("--dt", type=float, help="Fixed RK4 step; adaptive Dormand-Prince when omitted")
            sub.add_argument("--rel-tol", type=float)
            sub.add_argument("--abs-tol", type=float)
            sub.add_argument("--enforce-zero-energy", action="store_true",
                             help="Project the initial data onto E_L = 0")
        if name == "simulate":
            sub.add_argument("--reduced", action="store_true", help="Integrate the reduced contact system")
            sub.add_argument("--co-integrate-time", action="store_true",
                             help="Integrate the physical clock alongside a reparameterized reduced run")
    return parser


def parse_run_config(argv=None):
    args = build_parser().parse_args(argv)
    values = {k: v for k, v in vars(args).items() if k in RunConfig.__dataclass_fields__}
    cfg = RunConfig(**values)
    cfg.validate()
    return cfg


def resolve_model(cfg):
    model = load_model_file(cfg.file) if cfg.file else load_model(cfg.model)
    if cfg.promote_coupling or cfg.promote_energy:
        model = promoted_model(model, energy_sign=cfg.promote_energy, couplings=tuple(cfg.promote_coupling))
    return model


def output_path(config, cfg, stem, extension):
    if cfg.output:
        folder = os.path.dirname(cfg.output)
        if folder:
            os.makedirs(folder, exist_ok=True)
        return cfg.output
    folder = config["output"].get("directory", "output")
    os.makedirs(folder, exist_ok=True)
    return os.path.join(folder, f"{stem}.{extension}")


# -- commands -----------------------------------------------------------------

def cmd_list(config, cfg):
    print("Catalogued models:")
    for name in catalog_names():
        model = build_model(name)
        marker = "reducible" if model.reducible else "no symmetry"
        print(f"  {name:<24} {marker:<12} {model.description}")
    print(f"\nModel files in {MODEL_FILES}:")
    for entry in sorted(os.listdir(MODEL_FILES)):
        if entry.endswith(".model"):
            print(f"  {os.path.join(MODEL_FILES, entry)}")
    return EXIT_OK


def reduction_text(model):
    """The reduced objects of a model as ``key = expression`` lines."""
    result = model.reduction
    sym = result.symmetry
    lines = [
        f"model = {model.name}",
        f"symmetry = {sym.coordinate} A={sym.A} B={sym.B} Lambda={sym.degree}",
        f"f = {print_expression(result.f)}",
        f"S = {print_expression(result.S_expr)}",
        f"L^H = {print_expression(result.herglotz_L)}",
        f"H^c = {print_expression(result.contact_H)}",
    ]
    if result.contact_H_lagrangian is not None:
        lines.append(f"H^c.lagrangian = {print_expression(result.contact_H_lagrangian)}")
    mapping, rho_value = full_to_reduced_map(result)
    lines.append(f"map.rho = {print_expression(rho_value)}")
    for symbol, expression in mapping.items():
        lines.append(f"map.{symbol.name} = {print_expression(expression)}")
    return "\n".join(lines) + "\n"


def cmd_reduce(config, cfg):
    model = resolve_model(cfg)
    text = reduction_text(model)
    print(text, end="")
    if cfg.output:
        with open(output_path(config, cfg, model.name, "txt"), "w", encoding="utf-8") as f:
            f.write(text)
        logger.info(f"Reduction written to {cfg.output}")
    return EXIT_OK


def simulation_settings(config, cfg):
    settings = integrator_settings(config, rel_tol=cfg.rel_tol, abs_tol=cfg.abs_tol)
    if cfg.dt is not None:
        settings.update(method="rk4", dt=cfg.dt)
    return settings


def cmd_simulate(config, cfg):
    model = resolve_model(cfg)
    settings = simulation_settings(config, cfg)
    t_end = cfg.t_end if cfg.t_end is not None else settings.get("t_end", model.horizon)
    values = model.initial_values(enforce_zero_energy=True if cfg.enforce_zero_energy else None)
    binding = model.parameter_binding()

    if cfg.reduced:
        system = reduced_flow(model, binding, settings, co_integrate_time=cfg.co_integrate_time)
        start = mapped_initial(model, values, binding)
        kind = "reduced"
    else:
        system = full_flow(model, binding, settings)
        start = values
        kind = "full"

    y0 = system.initial_state(start)
    if settings["method"] == "rk4":
        # every step is a sample
        trajectory = integrate_fixed(system, y0, 0.0, float(t_end), settings["dt"])
    else:
        trajectory = run(system, y0, 0.0, float(t_end), settings)
    if cfg.reduced and trajectory.metadata.get("parameterization") == REPARAMETERIZED:
        trajectory = reconstruct_time(trajectory, model.reduction.symmetry.degree)

    path = output_path(config, cfg, f"{model.name}_{kind}", cfg.format)
    if cfg.format == "json":
        trajectory.to_json(path)
    else:
        trajectory.to_csv(path, float_format=config["output"].get("float_format", "%.17g"))
    print(f"{kind} trajectory of '{model.name}': {len(trajectory)} samples, t_end = {t_end} -> {path}")
    return EXIT_OK


def cmd_verify(config, cfg):
    model = resolve_model(cfg)
    options = verify_options(config, seed=cfg.seed, rel_tol=cfg.rel_tol, abs_tol=cfg.abs_tol)
    if cfg.dt is not None:
        options["settings"].update(method="rk4", dt=cfg.dt)
    if cfg.t_end is not None:
        options["horizons"][model.name] = cfg.t_end
    if cfg.enforce_zero_energy:
        model.enforce_zero_energy = True

    report = VerificationHarness(**options).run(model)
    print(report.to_text(), end="")
    path = output_path(config, cfg, f"{model.name}_report", cfg.format)
    if cfg.format == "json":
        report.to_json(path)
    else:
        report.to_csv(path, float_format=config["output"].get("float_format", "%.17g"))
    if report.passed:
        print(f"All {len(report.checks)} checks passed for '{model.name}'")
        return EXIT_OK
    print(f"{len(report.failures)} of {len(report.checks)} checks failed for '{model.name}'")
    return EXIT_VERIFY_FAILED


COMMANDS = {"list": cmd_list, "reduce": cmd_reduce, "simulate": cmd_simulate, "verify": cmd_verify}


def main(argv=None):
    try:
        config = load_config()
    except (OSError, ValueError) as e:
        print(f"Error loading configuration: {e}", file=sys.stderr)
        return EXIT_INPUT
    setup_logging(config)

    try:
        cfg = parse_run_config(argv)
        return COMMANDS[cfg.command](config, cfg)
    except INPUT_ERRORS as e:
        logger.error(f"Input error: {e}")
        return EXIT_INPUT
    except IntegrationError as e:
        logger.error(f"Integration failed: {e}")
        return EXIT_RUNTIME
    except Exception as e:
        logger.exception(f"Unexpected error: {e}")
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
