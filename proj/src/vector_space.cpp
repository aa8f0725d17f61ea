#include "debsum/vector_space.hpp"

#include <map>
#include <set>

namespace debsum {

SentenceVectors build_term_vectors(const std::vector<AnnotatedSentence>& sentences,
                                   const std::vector<std::string>& vocabulary,
                                   const SynonymTable& synonyms) {
    if (vocabulary.empty()) throw ComputationError("term vectors: empty vocabulary");
    std::map<std::string, Index> column;
    for (std::size_t j = 0; j < vocabulary.size(); ++j) column.emplace(vocabulary[j], static_cast<Index>(j));

    std::vector<RowVectorX<double>> rows;
    SentenceVectors out;
    for (const auto& s : sentences) {
        RowVectorX<double> row = RowVectorX<double>::Zero(static_cast<Index>(vocabulary.size()));
        for (const auto& ann : s.terms) {
            const auto it = column.find(synonyms.canonical(ann.term));
            if (it != column.end()) row[it->second] += 1.0;
        }
        if (row.sum() == 0.0) {
            out.excluded.push_back(s.id);
            continue;
        }
        out.ids.push_back(s.id);
        rows.push_back(std::move(row));
    }
    out.counts.resize(static_cast<Index>(rows.size()), static_cast<Index>(vocabulary.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) out.counts.row(static_cast<Index>(i)) = rows[i];
    return out;
}

std::vector<std::string> canonical_vocabulary(const Gazetteer& gazetteer, const SynonymTable& synonyms) {
    std::set<std::string> vocab;
    for (const auto& term : gazetteer.terms()) vocab.insert(synonyms.canonical(term));
    return {vocab.begin(), vocab.end()};
}

}  // namespace debsum
