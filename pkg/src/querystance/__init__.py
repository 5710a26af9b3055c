"""Query-sentence relevance and stance classification.

Two chained classifiers over a labeled sentence corpus: a binary
relevance stage driven by five lexical similarity features, and a
support/oppose/neutral stance stage driven by a TF-IDF bag-of-words
block plus sentiment counts. Both stages use the package's own
SMO-trained kernel SVM.
"""

from .corpus import (
    DatasetSplit,
    QueryGroup,
    SentenceRecord,
    group_by_query,
    load_dataset,
    split_train_dev,
)
from .features import (
    FeatureVector,
    VocabularyModel,
    dice_similarity,
    feature_cosine,
    feature_exact,
    feature_neighborhood,
    feature_noun,
    feature_stemmed,
    fit_vocabulary,
    task1_features,
    task2_features,
    tfidf_vector,
)
from .lexicons import (
    GlossDictionary,
    NounLexicon,
    Polarity,
    SentimentLexicon,
    gloss_first_k_sentences,
    is_noun,
    load_gloss_dictionary,
    load_noun_lexicon,
    load_sentiment_lexicon,
    polarity,
)
from .pipeline import (
    EvaluationReport,
    LexiconSet,
    PipelineConfig,
    TrainedPipeline,
    evaluate,
    grid_search,
    load_task_model,
    macro_average,
    predict_task1,
    predict_task2,
    save_task_model,
    train_task1,
    train_task2,
)
from .svm import (
    BinaryModel,
    KernelConfig,
    MulticlassModel,
    SvmConfig,
    decision_value,
    dual_objective,
    kernel_eval,
    load_model,
    predict,
    save_model,
    train_binary,
    train_multiclass,
)
from .textproc import porter_stem, split_sentences, stem_tokens, tokenize

__version__ = "0.1.0"
