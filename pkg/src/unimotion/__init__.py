"""unimotion: a desk-scale unified engine for traffic motion simulation,
long-range trajectory prediction and ego planning, built on one decoder-only
transformer trained jointly with next-token classification and dense
long-range future regression."""

__version__ = "0.1.0"
