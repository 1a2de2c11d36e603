from .bleu import AddEpsilon, NgramStats, bleu, corpus_aggregate, ngram_stats, sentence_bleu
from .meteor import MeteorParams, SynonymTable, align, meteor, meteor_multi
from .nist import InfoModel, nist
from .rouge import lcs_length, rouge_l, rouge_l_multi

__all__ = [
    "AddEpsilon", "NgramStats", "bleu", "corpus_aggregate", "ngram_stats", "sentence_bleu",
    "MeteorParams", "SynonymTable", "align", "meteor", "meteor_multi",
    "InfoModel", "nist", "lcs_length", "rouge_l", "rouge_l_multi",
]
