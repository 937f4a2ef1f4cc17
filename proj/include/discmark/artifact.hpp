// Wire formats: text artifacts, detection reports and simulated-model specs
// as JSON. Field layout is the cross-tool contract; bits travel base64,
// packed MSB-first.
#pragma once

#include <string>

#include <json.hpp>

#include "discmark/disc.hpp"
#include "discmark/model.hpp"
#include "discmark/zerobit.hpp"

namespace discmark {

inline constexpr int kSchemaVersion = 1;

struct text_artifact {
    std::string scheme;  // "zerobit-noinit" | "zerobit-init" | "disc"
    watermarked_text text;
    unsigned payload_bits = 0;        // disc only
    bool has_message = false;         // encoder-side ground truth, optional
    uint64_t message = 0;
};

nlohmann::json to_json(const text_artifact& artifact);
text_artifact text_artifact_from_json(const nlohmann::json& j);

nlohmann::json to_json(const detection_report& report);
nlohmann::json to_json(const disc_detection_report& report);

nlohmann::json to_json(const simulated_model_spec& spec);
simulated_model_spec simulated_model_spec_from_json(const nlohmann::json& j);

std::string law_name(probability_law law);
probability_law law_from_name(const std::string& name);

}  // namespace discmark
