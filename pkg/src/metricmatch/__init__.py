"""metricmatch: rank quantifiable metrics against natural-language security
requirements and score the rankings with nDCG@10."""

from .corpus import (
    Corpus,
    CorpusError,
    GroundTruth,
    Metric,
    Requirement,
    WordStats,
    load_corpus,
    save_corpus,
    word_count_stats,
)
from .embedding import (
    Embedding,
    EmbeddingError,
    HashBackend,
    StoreBackend,
    WordVectorBackend,
    WordVectorTable,
    embed_average,
    l2_normalize,
    load_word_vectors,
    text_key,
)
from .evaluation import EvalReport, dcg_at_k, evaluate, gain, idcg_at_k, ndcg_at_k
from .preprocess import clean, default_stopwords, load_stopwords, remove_stopwords, tokenize
from .ranking import (
    COSINE,
    EUCLIDEAN_KNN,
    KdTree,
    RankedList,
    build_kdtree,
    cosine_similarity,
    knn_query,
    rank_all,
    rank_by_cosine,
)
from .report import Comparison, compare, emit
from .store import StoreError, store_load, store_save

__version__ = "0.1.0"
