#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ramt/vectors.hpp"

namespace ramt::stacking {

struct Candidate {
    std::string system;
    std::string text;
    vectors::EmbeddingVector embedding;
};

struct CandidateSet {
    std::string source_text;
    vectors::EmbeddingVector source_embedding;
    std::vector<Candidate> candidates;

    void validate() const {
        if (candidates.empty())
            throw std::invalid_argument("candidate set must be non-empty");
        for (const auto& c : candidates)
            if (c.embedding.dim() != source_embedding.dim())
                throw std::invalid_argument(
                    "candidate '" + c.system + "' embedding dim " +
                    std::to_string(c.embedding.dim()) + " does not match source dim " +
                    std::to_string(source_embedding.dim()));
    }
};

struct SelectionResult {
    size_t winner = 0;
    std::vector<double> similarities;  // aligned with candidates, for audit
};

// Winner is the candidate whose embedding is nearest the source under cosine
// (equivalently, smallest cosine distance). Ties go to the lowest index.
inline SelectionResult select_by_embedding(const CandidateSet& set) {
    set.validate();
    SelectionResult result;
    result.similarities.reserve(set.candidates.size());
    for (size_t i = 0; i < set.candidates.size(); ++i) {
        const double sim = vectors::cosine_similarity(
            set.source_embedding, set.candidates[i].embedding);
        result.similarities.push_back(sim);
        if (sim > result.similarities[result.winner]) result.winner = i;
    }
    return result;
}

enum class Direction { maximize, minimize };

// Picks by externally supplied scores (e.g. a perplexity file). Ties go to
// the lowest index.
inline size_t select_by_external_score(std::span<const double> scores,
                                       Direction direction) {
    if (scores.empty())
        throw std::invalid_argument("scores must be non-empty");
    size_t best = 0;
    for (size_t i = 0; i < scores.size(); ++i) {
        if (std::isnan(scores[i]))
            throw std::invalid_argument("NaN score at index " + std::to_string(i));
        if (direction == Direction::maximize ? scores[i] > scores[best]
                                             : scores[i] < scores[best])
            best = i;
    }
    return best;
}

}  // namespace ramt::stacking
