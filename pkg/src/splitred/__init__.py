"""Split reduction of Weil restrictions over complete discrete valuation fields."""

from .errors import SplitRedError
from .localfield import Tower, make_tower, parse_element
from .tatesplit import TateCurve, split_status
from .unitpowers import TruncatedUnitRing, mth_power_in_units, principal_power_membership, unit_decompose

__version__ = "0.1.0"

__all__ = [
    "SplitRedError",
    "TateCurve",
    "Tower",
    "TruncatedUnitRing",
    "make_tower",
    "mth_power_in_units",
    "parse_element",
    "principal_power_membership",
    "split_status",
    "unit_decompose",
]
