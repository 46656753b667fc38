"""Tandem-duplication distance from binary sequences to their square-free roots."""
from .seqcore import (ROOTS, BinarySeq, DedupProcess, DedupStep, TandemRepeat, apply_dedup,
                      apply_dup, find_repeats, is_square_free, kmer_count, kmer_lower_bound,
                      log_lower_bound, normalize_process, replay, root_of)

__version__ = "0.1.0"
