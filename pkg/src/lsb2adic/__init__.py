"""LSB and bit-component sequences of p-ary m-sequences: autocorrelation and 2-adic complexity."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    BudgetExceeded,
    InternalInconsistency,
    InvalidArgument,
    ResourceLimit,
    UnsupportedPrime,
)
from .gf import FieldContext, build_field, field_for, retarget_beta, trace  # noqa: E402
from .seq import (  # noqa: E402
    BinarySequence,
    PArySequence,
    b_sequence,
    bit_component,
    cyclic_shift,
    lsb_of,
    lsb_sequence,
    m_sequence,
    shift_offset,
)
from .autocorr import ac_at, ac_profile, acb_vector, predicted_ac, table1, verify_theorem1  # noqa: E402
from .twoadic import (  # noqa: E402
    conjecture_check,
    exact_phi2,
    gcd_halves,
    predicted_gcd,
    theorem_bound,
    two_adic_report,
)

__all__ = [
    "BinarySequence", "BudgetExceeded", "FieldContext", "InternalInconsistency", "InvalidArgument",
    "PArySequence", "ResourceLimit", "UnsupportedPrime", "ac_at", "ac_profile", "acb_vector",
    "b_sequence", "bit_component", "build_field", "conjecture_check", "cyclic_shift",
    "exact_phi2", "field_for", "gcd_halves", "lsb_of", "lsb_sequence", "m_sequence",
    "predicted_ac", "predicted_gcd", "retarget_beta", "shift_offset", "table1",
    "theorem_bound", "trace", "two_adic_report", "verify_theorem1",
]
