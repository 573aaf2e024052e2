"""Regular and coherent logic: formation, proofs, and the passage to and from morphisms."""
from .formation import (
    FormationError, ModeViolation, TypeMismatch, UnboundVariable, UnknownSymbol,
    check_formation, check_sequent, check_theory, type_of,
)
from .models import is_model, random_model, sequent_holds
from .proofs import (
    ALL_RULES, COHERENT_RULES, REGULAR_RULES, AlphaMismatch, ProofCheck, ProofTree,
    RuleMismatch, UnknownAxiomIndex, check_proof, rules_used,
)
from .semantics import (
    SignatureMap, UnmappedSymbol, interpret, interpret_term, round_trip,
    theory_of_presentation, translate_to_logic,
)
from .syntax import (
    And, App, Basic, Case, Context, Eq, Exists, Falsity, FunSymbol, Inj1, Inj2, One, Or,
    PairT, Prod, Proj1, Proj2, Rel, Sequent, StarT, SumT, Theory, Truth, Var, Zero,
    alpha_canonicalize, alpha_equivalent_sequents,
)
from .text import (
    format_context, format_formula, format_proof, format_sequent, format_term, format_type,
    parse_context, parse_formula, parse_judgement, parse_proof, parse_proofs, parse_sequent,
    parse_signature_map, parse_term, parse_theory, parse_type, print_proofs, print_theory,
)
