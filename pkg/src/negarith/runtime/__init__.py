"""Evaluation, finite models, soundness checks and benchmarks."""
from .evaluator import EvalConfig, Evaluator, Instrumentation, evaluate, run_deep
from .model import FiniteModel, FunValue, ModelError, UnboundModelVariable, enumerate_values

__all__ = ["EvalConfig", "Evaluator", "Instrumentation", "evaluate", "run_deep",
           "FiniteModel", "FunValue", "ModelError", "UnboundModelVariable", "enumerate_values"]
