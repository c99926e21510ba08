"""Exception types that carry semantic meaning across module boundaries.

Plain ``ValueError`` is used for malformed arguments; the classes here exist
so callers can distinguish recoverable decode failures from genuine numeric
breakdown.
"""


class UndecodableSupportError(Exception):
    """A recovered support has no bit-word preimage under the codec.

    Signals a block error to the caller; never indicates a bug.
    """


class NumericalDegeneracyError(Exception):
    """A linear system required by recovery is rank deficient or singular."""
