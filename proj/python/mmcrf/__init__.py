"""Chinese word segmentation toolkit.

Rough lexicon-driven segmentation (MMSEG) whose BMES output feeds a
linear-chain CRF as an extra observation column.
"""

from mmcrf._core import (
    CrfModel,
    EvalReport,
    FreedomTable,
    Lexicon,
    NumericalError,
    TemplateSet,
    TokenGrid,
    ToolkitError,
    TrainConfig,
    f_score,
    make_training_grids,
    mmseg_segment,
    mmseg_tags,
    read_segmented_corpus,
    read_training_file,
    score,
    segment_text,
    tags_to_words,
    train,
    viterbi,
    words_to_tags,
    write_segmented_corpus,
    write_training_file,
    __version__,
)

__all__ = [
    "CrfModel",
    "EvalReport",
    "FreedomTable",
    "Lexicon",
    "NumericalError",
    "TemplateSet",
    "TokenGrid",
    "ToolkitError",
    "TrainConfig",
    "f_score",
    "make_training_grids",
    "mmseg_segment",
    "mmseg_tags",
    "read_segmented_corpus",
    "read_training_file",
    "score",
    "segment_text",
    "tags_to_words",
    "train",
    "viterbi",
    "words_to_tags",
    "write_segmented_corpus",
    "write_training_file",
    "__version__",
]
