from ._biasweat import (
    BiasweatError,
    EmbeddingTable,
    anti_chinese_14,
    association,
    builtin_wordsets,
    cosine,
    differential,
    effect_size,
    exact_p_value,
    load_glove_text,
    load_word2vec_text,
    mc_p_value,
    save_glove_text,
    tokenize_tweet,
    weat,
)

__all__ = [
    "BiasweatError",
    "EmbeddingTable",
    "anti_chinese_14",
    "association",
    "builtin_wordsets",
    "cosine",
    "differential",
    "effect_size",
    "exact_p_value",
    "load_glove_text",
    "load_word2vec_text",
    "mc_p_value",
    "save_glove_text",
    "tokenize_tweet",
    "weat",
]
