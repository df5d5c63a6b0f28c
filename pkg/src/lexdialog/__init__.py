"""lexdialog: interrogate laws the way you would a clerk.

Laws are formulas over a declared vocabulary, case files are finite
models, and every question — does this case satisfy the law, can the law
be satisfied at all, does it force this property — comes back with a
verdict plus a witness or counterexample that can be re-checked
independently.
"""

from . import _kernel
from .bias import BiasReport, Violation, audit, bias_formula
from .engine import (DEFAULT_CONFIG, INVALID, SAT, UNSAT, UNSAT_UP_TO_BOUND,
                     VALID, VALID_UP_TO_BOUND, DecisionResult, EngineConfig,
                     completeness_bound, consistent, implies, sat_fo_bounded,
                     sat_ltlf, valid_ltlf)
from .errors import (DataError, FormulaError, LayerMismatch, LexdialogError,
                     ParseError, ProtectedEqualsScore, ResourceLimit,
                     SignatureError, SourceSpan, UnknownExclusion,
                     UnknownFunction)
from .evaluate import (Assignment, Environment, TracePosition, Verdict, check,
                       eval_fo, eval_ltlf)
from .formula import Formula, free_variables, quantifier_rank
from .parser import load_law, parse, parse_law
from .printer import render
from .session import Reply, Session, execute, replay, transcript
from .signature import (Signature, format_signature, load_signature,
                        parse_signature, relational, temporal)
from .structures import (StructureModel, Trace, load_structure,
                         load_structure_file, load_trace, load_trace_file,
                         save_structure, save_trace)
from .transform import expand_macros, nnf

__version__ = "0.1.0"

kernel_backend = _kernel.active_backend
