from .extract import FEATURE_NAMES, FEATURE_TITLES, FeatureVector, document_features, extract_features, text_features
from .frequency import FrequencyTable, load_frequency_table, log_unigram_frequency
from .syllables import count_syllables
from .tokenize import POS, LexiconTagger, Tagger, Token, tokenize
from .trees import ParseTree, parse_height, read_tree, read_tree_file

__all__ = [
    "FEATURE_NAMES", "FEATURE_TITLES", "FeatureVector", "FrequencyTable", "LexiconTagger", "POS", "ParseTree",
    "Tagger", "Token", "count_syllables", "document_features", "extract_features",
    "load_frequency_table", "log_unigram_frequency", "parse_height", "read_tree",
    "read_tree_file", "text_features", "tokenize",
]
