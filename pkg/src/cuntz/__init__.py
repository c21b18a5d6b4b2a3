"""Exact, sampled experiments with Cuntz semigroups and the category Cu."""
from .core import (ConfigurationError, CuModel, ExtNatModel, IncreasingSequence, NumericalSemigroupModel,
                   ProductModel, Report, ScalarModel, TwoPointModel, UndecidedError, Verdict,
                   check_cu_axioms, check_cu_morphism, rank_tuple_model)
from .values import INF, QuadraticNumber

__all__ = ["ConfigurationError", "CuModel", "ExtNatModel", "IncreasingSequence", "NumericalSemigroupModel",
           "ProductModel", "Report", "ScalarModel", "TwoPointModel", "UndecidedError", "Verdict",
           "check_cu_axioms", "check_cu_morphism", "rank_tuple_model", "INF", "QuadraticNumber"]
