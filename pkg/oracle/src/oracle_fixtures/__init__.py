"""Golden metric fixture regeneration.

Recomputes the committed golden fixtures from the pair set: expected
scores come from the evaluation CLI's score output (consumed through its
public file formats), reference scores from the vendored reference
scorer implementations in :mod:`oracle_fixtures.scorers`.
"""

__version__ = "0.1.0"
