"""
Driving experiments from a scenario
===================================

The command line tool reads JSON scenarios; the same runner is available
from Python.  Expressions such as ``2 + 0.5*sin(x)`` are parsed once and
evaluated on the grid.
"""
# %%
import json
import tempfile

from varbesov.cli.expression import ExpressionError, parse_expression
from varbesov.cli.scenario import load_scenario, run_scenario

print(parse_expression("2 + sin(x)^2").evaluate(x=1.0))
try:
    parse_expression("2 + foo(x)")
except ExpressionError as err:
    print("error at byte", err.offset, ":", err)

# %%
scenario = {
    "name": "demo", "seed": 0, "box": {"n": 1, "L": 8, "N": 256}, "family": "B",
    "p": "2 + 0.5*sin(x)", "q": "2 + 0.5*cos(x)", "s": "1 + 0.25*sin(x)",
    "phi": {"tau": 0.1},
    "experiments": [
        {"type": "thresholds"},
        {"type": "norm", "f": "exp(-x^2)"},
        {"type": "discrete", "D1": 1.0, "D2": 1.1, "trials": 5, "seeds": [0, 1]},
    ],
}
with tempfile.TemporaryDirectory() as out:
    code, report = run_scenario(load_scenario(scenario), out)
print("exit code", code)
print(json.dumps(report["experiments"][1]["result"], indent=2))
