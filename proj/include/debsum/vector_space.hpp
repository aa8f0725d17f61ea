#pragma once

#include <string>
#include <vector>

#include "debsum/annotate.hpp"
#include "debsum/linalg.hpp"
#include "debsum/term_clustering.hpp"

namespace debsum {

/// Term-frequency vectors of sentences over an ordered ontology vocabulary.
struct SentenceVectors {
    std::vector<std::string> ids;       // row labels of `counts`
    MatrixX<double> counts;             // ids.size() x vocabulary.size()
    std::vector<std::string> excluded;  // sentences with no vocabulary term
};

/// counts(i, j) = occurrences of vocabulary[j] among the canonicalized
/// annotations of sentence i. All-zero rows are moved to `excluded`.
SentenceVectors build_term_vectors(const std::vector<AnnotatedSentence>& sentences,
                                   const std::vector<std::string>& vocabulary,
                                   const SynonymTable& synonyms);

/// Sorted, deduplicated canonical forms of every gazetteer term.
std::vector<std::string> canonical_vocabulary(const Gazetteer& gazetteer, const SynonymTable& synonyms);

}  // namespace debsum
