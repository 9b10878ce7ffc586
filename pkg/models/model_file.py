"""
Reader for user model files.

Line-oriented sections, '#' starts a comment:

    [coordinates]   name: order            (one per line)
    [parameters]    name = value | name    (values become the default binding)
    [lagrangian]    expression, may continue over several lines
    [symmetry]      coordinate = q, A = 1, B = 0, Lambda = 2  (A/B/Lambda may be omitted and solved)
    [contact]       action = z ; term = <expression added to L>  (repeatable)
    [initial]       jet = value            (e.g. q' = 0.1, r[4] = 0)
    [lapse]         N = <expression in t>
"""

import logging
import os
import re

from expr import ExpressionError, parse_number
from mech import JetChart, LagrangianSystem, MechanicsError
from models.descriptor import ModelDescriptor
from models.errors import ModelFileError
from reduce import ReductionError, ScalingSymmetry, solve_weights

logger = logging.getLogger(__name__)

SECTIONS = ("coordinates", "parameters", "lagrangian", "symmetry", "contact", "initial", "lapse")
SECTION_RE = re.compile(r"^\[(\w+)\]$")
NAME_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")


def _strip(line):
    return line.split("#", 1)[0].strip()


def _split_pair(text, sep, lineno, path):
    if sep not in text:
        raise ModelFileError(f"Expected '<name> {sep} <value>', got '{text}'", lineno, path)
    name, value = (part.strip() for part in text.split(sep, 1))
    if not name or not value:
        raise ModelFileError(f"Expected '<name> {sep} <value>', got '{text}'", lineno, path)
    return name, value


def _number(text, lineno, path):
    try:
        return parse_number(text)
    except ExpressionError as e:
        raise ModelFileError(f"Invalid number '{text}': {e}", lineno, path) from e


def read_sections(text, path=None):
    """Split model text into {section: [(line number, content)]}."""
    sections = {}
    current = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip(raw)
        if not line:
            continue
        match = SECTION_RE.match(line)
        if match:
            current = match.group(1).lower()
            if current not in SECTIONS:
                raise ModelFileError(f"Unknown section [{current}]", lineno, path)
            if current in sections:
                raise ModelFileError(f"Section [{current}] appears twice", lineno, path)
            sections[current] = []
            continue
        if current is None:
            raise ModelFileError("Content before the first section header", lineno, path)
        sections[current].append((lineno, line))
    for required in ("coordinates", "lagrangian"):
        if not sections.get(required):
            raise ModelFileError(f"Missing or empty [{required}] section", None, path)
    return sections


def parse_model(text, name="model", path=None):
    """Build a ModelDescriptor from model-file text."""
    sections = read_sections(text, path)

    coordinates = {}
    for lineno, line in sections["coordinates"]:
        base, order = _split_pair(line, ":", lineno, path)
        if not NAME_RE.match(base):
            raise ModelFileError(f"Invalid coordinate name '{base}'", lineno, path)
        if base in coordinates:
            raise ModelFileError(f"Coordinate '{base}' declared twice", lineno, path)
        try:
            coordinates[base] = int(order)
        except ValueError:
            raise ModelFileError(f"Order of '{base}' must be an integer, got '{order}'", lineno, path) from None

    parameters, binding = [], {}
    for lineno, line in sections.get("parameters", []):
        if "=" in line:
            pname, value = _split_pair(line, "=", lineno, path)
            binding[pname] = float(_number(value, lineno, path))
        else:
            pname = line
        if not NAME_RE.match(pname):
            raise ModelFileError(f"Invalid parameter name '{pname}'", lineno, path)
        parameters.append(pname)

    action, terms = None, []
    for lineno, line in sections.get("contact", []):
        key, value = _split_pair(line, "=", lineno, path)
        if key == "action":
            action = value
        elif key == "term":
            terms.append((lineno, value))
        else:
            raise ModelFileError(f"Unknown [contact] key '{key}'", lineno, path)
    if terms and action is None:
        action = "z"

    lapse = None
    lapse_lines = sections.get("lapse", [])
    if len(lapse_lines) > 1:
        raise ModelFileError("[lapse] takes a single 'N = <expression>' line", lapse_lines[1][0], path)
    if lapse_lines:
        lineno, line = lapse_lines[0]
        lapse = _split_pair(line, "=", lineno, path)

    first_line = sections["lagrangian"][0][0]
    try:
        chart = JetChart(coordinates, parameters=parameters, contact=action is not None, action=action or "z",
                         lapse=lapse, name=name)
    except (MechanicsError, ExpressionError) as e:
        raise ModelFileError(str(e), sections["coordinates"][0][0], path) from e

    source = " ".join(line for _, line in sections["lagrangian"])
    try:
        lagrangian = chart.parse(source)
        for lineno, term in terms:
            first_line = lineno
            lagrangian = lagrangian + chart.parse(term)
        system = LagrangianSystem(chart, lagrangian, name=name)
    except (ExpressionError, MechanicsError) as e:
        raise ModelFileError(str(e), first_line, path) from e

    initial = {}
    for lineno, line in sections.get("initial", []):
        jet, value = _split_pair(line, "=", lineno, path)
        try:
            chart.symbol(jet)
        except ExpressionError:
            raise ModelFileError(f"Unknown jet '{jet}' in [initial]", lineno, path) from None
        initial[jet] = float(_number(value, lineno, path))

    symmetry = None
    if "symmetry" in sections:
        symmetry = _symmetry(system, sections["symmetry"], path)

    logger.info(f"Parsed model '{name}' with coordinates {coordinates}")
    return ModelDescriptor(name=name, system=system, symmetry=symmetry, binding=binding, initial=initial,
                           description=f"User model {name}", metadata={"source": path or "<text>"})


def _symmetry(system, lines, path):
    values = {}
    for lineno, line in lines:
        key, value = _split_pair(line, "=", lineno, path)
        values[key] = (lineno, value)
    if "coordinate" not in values:
        raise ModelFileError("[symmetry] needs 'coordinate = <name>'", lines[0][0], path)
    lineno, coordinate = values["coordinate"]
    if coordinate not in system.chart.orders:
        raise ModelFileError(f"Scaled coordinate '{coordinate}' is not declared", lineno, path)
    numbers = {k: _number(values[k][1], values[k][0], path) for k in ("A", "B", "Lambda") if k in values}
    A = numbers.get("A", 1)
    try:
        if "B" in numbers and "Lambda" in numbers:
            return ScalingSymmetry(coordinate, A, numbers["B"], numbers["Lambda"])
        solution = solve_weights(system, coordinate, A=A)
        if not solution.unique:
            raise ModelFileError("[symmetry] weights are not determined; give B and Lambda", lines[0][0], path)
        symmetry = solution.symmetry(coordinate, A)
        for key, value in numbers.items():
            declared = symmetry.A if key == "A" else symmetry.B if key == "B" else symmetry.degree
            if declared != value:
                raise ModelFileError(f"[symmetry] {key} = {value} contradicts the weight balance ({declared})",
                                     values[key][0], path)
        return symmetry
    except ReductionError as e:
        raise ModelFileError(str(e), lines[0][0], path) from e


def load_model_file(path):
    if not os.path.exists(path):
        raise ModelFileError("No such model file", None, path)
    with open(path, "r", encoding="utf-8") as f:
        text = f.read()
    name = os.path.splitext(os.path.basename(path))[0]
    return parse_model(text, name=name, path=path)
