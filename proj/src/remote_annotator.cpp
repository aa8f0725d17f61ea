#include "debsum/remote_annotator.hpp"

#include <algorithm>

#include <httplib.h>
#include <json.hpp>

namespace debsum {

namespace {

// Byte offset of every code point boundary, plus the end of the string.
std::vector<std::size_t> code_point_offsets(const std::string& text) {
    std::vector<std::size_t> offsets;
    for (std::size_t i = 0; i < text.size(); ++i) {
        if ((static_cast<unsigned char>(text[i]) & 0xC0) != 0x80) offsets.push_back(i);
    }
    offsets.push_back(text.size());
    return offsets;
}

}  // namespace

std::vector<TermAnnotation> map_char_spans(const Sentence& sentence, const std::vector<CharSpan>& spans) {
    const auto offsets = code_point_offsets(sentence.text);
    const auto token_spans = tokenize_with_offsets(sentence.text);
    std::vector<TermAnnotation> out;
    std::vector<CharSpan> sorted = spans;
    std::sort(sorted.begin(), sorted.end(), [](const CharSpan& a, const CharSpan& b) {
        return a.start_char != b.start_char ? a.start_char < b.start_char : a.end_char > b.end_char;
    });
    std::size_t next_free = 0;
    for (const auto& span : sorted) {
        if (span.start_char >= span.end_char || span.end_char >= offsets.size()) continue;
        const std::size_t byte_begin = offsets[span.start_char];
        const std::size_t byte_end = offsets[span.end_char];
        std::size_t first = token_spans.size(), last = 0;
        for (std::size_t t = 0; t < token_spans.size(); ++t) {
            if (token_spans[t].end > byte_begin && token_spans[t].begin < byte_end) {
                first = std::min(first, t);
                last = t + 1;
            }
        }
        if (first >= last || first < next_free) continue;
        std::string term = token_spans[first].token;
        for (std::size_t t = first + 1; t < last; ++t) term += ' ' + token_spans[t].token;
        out.push_back({sentence.id, std::move(term), first, last});
        next_free = last;
    }
    return out;
}

RemoteAnnotator::RemoteAnnotator(std::string host, int port, std::string endpoint,
                                 std::chrono::milliseconds timeout, const Gazetteer& fallback)
    : host_(std::move(host)), port_(port), endpoint_(std::move(endpoint)), timeout_(timeout), fallback_(fallback) {}

std::vector<TermAnnotation> RemoteAnnotator::annotate(const Sentence& sentence) const {
    httplib::Client client(host_, port_);
    const auto seconds = std::chrono::duration_cast<std::chrono::seconds>(timeout_);
    const auto micros = std::chrono::duration_cast<std::chrono::microseconds>(timeout_ - seconds);
    client.set_connection_timeout(seconds.count(), micros.count());
    client.set_read_timeout(seconds.count(), micros.count());
    client.set_write_timeout(seconds.count(), micros.count());

    const nlohmann::json body{{"text", sentence.text}};
    auto result = client.Post(endpoint_, body.dump(), "application/json");
    if (result && result->status == 200) {
        try {
            const auto doc = nlohmann::json::parse(result->body);
            std::vector<CharSpan> spans;
            for (const auto& a : doc.at("annotations")) {
                spans.push_back({a.at("start_char").get<std::size_t>(), a.at("end_char").get<std::size_t>()});
            }
            return map_char_spans(sentence, spans);
        } catch (const std::exception&) {
            // fall through to the gazetteer
        }
    }
    ++fallbacks_;
    return annotate_sentence(sentence, fallback_);
}

}  // namespace debsum
