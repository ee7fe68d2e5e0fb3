"""Command-line front end: expression language, scenarios and subcommands."""
from .expression import Expression, ExpressionError, parse_expression
from .scenario import Scenario, ScenarioError, load_scenario, report_json, run_scenario

__all__ = ["Expression", "ExpressionError", "parse_expression", "Scenario", "ScenarioError",
           "load_scenario", "report_json", "run_scenario"]
