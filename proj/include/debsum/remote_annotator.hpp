#pragma once

#include <chrono>
#include <string>
#include <vector>

#include "debsum/annotate.hpp"

namespace debsum {

/// Client for an HTTP term-annotation service.
///
/// POSTs {"text": ...} to `endpoint` and expects
/// {"annotations": [{"term", "start_char", "end_char"}]} where offsets count
/// Unicode code points. Character spans are mapped onto the sentence's token
/// spans; any transport, status, or payload failure falls back to the local
/// gazetteer so annotation never blocks the pipeline.
class RemoteAnnotator {
public:
    RemoteAnnotator(std::string host, int port, std::string endpoint,
                    std::chrono::milliseconds timeout, const Gazetteer& fallback);

    std::vector<TermAnnotation> annotate(const Sentence& sentence) const;

    /// How many requests ended up on the fallback path.
    std::size_t fallback_count() const { return fallbacks_; }

private:
    std::string host_;
    int port_;
    std::string endpoint_;
    std::chrono::milliseconds timeout_;
    const Gazetteer& fallback_;
    mutable std::size_t fallbacks_ = 0;
};

/// Maps code-point spans reported by a service onto token spans of `text`.
/// Annotations that cover no token, or overlap an earlier kept one, are dropped.
struct CharSpan {
    std::size_t start_char = 0;
    std::size_t end_char = 0;
};
std::vector<TermAnnotation> map_char_spans(const Sentence& sentence, const std::vector<CharSpan>& spans);

}  // namespace debsum
