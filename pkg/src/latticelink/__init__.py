"""Bipartite link prediction from concept lattices.

Pipeline: load a bipartite network as a formal context, enumerate its
concepts (maximal bi-cliques) and their cover relation, pre-train a
position-free transformer encoder on masked-token and neighbor-pair
prediction over extents/intents, then fine-tune it to score object-object
and object-attribute links.
"""

from .context import (
    BipartiteContext,
    SplitPair,
    context_stats,
    load_edge_list,
    split_random_edges,
    split_temporal,
    write_edge_list,
)
from .fca import (
    ConceptBudgetError,
    ConceptLattice,
    FormalConcept,
    cover_relation,
    derive_attrs,
    derive_objects,
    enumerate_concepts,
    neighbor_pairs,
)
from .metrics import aupr, best_f1_sweep, confusion, metric_report, roc_auc
from .model import Adam, EncoderConfig, Model, load_checkpoint, save_checkpoint
from .tokens import TokenBatch, TokenSequence, Vocab, apply_mtp_mask, encode_pair, encode_single

__version__ = "0.1.0"
