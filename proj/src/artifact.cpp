#include "discmark/artifact.hpp"

#include <json.hpp>

namespace discmark {

using nlohmann::json;

std::string law_name(probability_law law) {
    switch (law) {
        case probability_law::uniform01: return "uniform01";
        case probability_law::beta: return "beta";
        case probability_law::fixed: return "fixed";
    }
    throw std::logic_error("law_name: unknown law");
}

probability_law law_from_name(const std::string& name) {
    if (name == "uniform01") return probability_law::uniform01;
    if (name == "beta") return probability_law::beta;
    if (name == "fixed") return probability_law::fixed;
    throw std::invalid_argument("unknown probability law: " + name);
}

json to_json(const text_artifact& artifact) {
    json j;
    j["schema_version"] = kSchemaVersion;
    j["scheme"] = artifact.scheme;
    j["bits"] = base64_encode(artifact.text.bits.packed_msb_first());
    j["length_bits"] = artifact.text.bits.size();
    j["n"] = artifact.text.initial_chunk_len;
    j["watermark_applied"] = artifact.text.watermark_applied;
    if (artifact.scheme == "disc") {
        j["payload_bits"] = artifact.payload_bits;
        if (artifact.has_message) j["message"] = artifact.message;
    }
    return j;
}

text_artifact text_artifact_from_json(const json& j) {
    text_artifact artifact;
    artifact.scheme = j.at("scheme").get<std::string>();
    const auto nbits = j.at("length_bits").get<std::size_t>();
    artifact.text.bits = bit_string::from_packed(base64_decode(j.at("bits").get<std::string>()), nbits);
    artifact.text.initial_chunk_len = j.at("n").get<std::size_t>();
    artifact.text.watermark_applied = j.value("watermark_applied", true);
    artifact.payload_bits = j.value("payload_bits", 0u);
    if (j.contains("message")) {
        artifact.has_message = true;
        artifact.message = j.at("message").get<uint64_t>();
    }
    return artifact;
}

json to_json(const detection_report& report) {
    json j;
    j["schema_version"] = kSchemaVersion;
    j["is_watermarked"] = report.is_watermarked;
    j["global_p_value"] = report.global_p_value;
    j["n_star"] = report.n_star;
    j["best_score"] = report.best_score;
    j["dedup_count"] = report.dedup_count;
    return j;
}

json to_json(const disc_detection_report& report) {
    json j = to_json(static_cast<const detection_report&>(report));
    j["m_star"] = report.m_star;
    j["delta_star"] = report.delta_star;
    j["search_evaluations"] = report.search_evaluations;
    j["p_floor"] = report.p_floor;
    j["p_floor_active"] = report.p_floor_active;
    return j;
}

json to_json(const simulated_model_spec& spec) {
    json j;
    j["seed"] = spec.seed;
    j["length_bits"] = spec.length_bits;
    j["law"] = law_name(spec.law);
    j["law_params"] = json::array({spec.law_a, spec.law_b});
    return j;
}

simulated_model_spec simulated_model_spec_from_json(const json& j) {
    simulated_model_spec spec;
    spec.seed = j.at("seed").get<uint64_t>();
    spec.length_bits = j.at("length_bits").get<std::size_t>();
    spec.law = law_from_name(j.at("law").get<std::string>());
    if (j.contains("law_params")) {
        const auto& params = j.at("law_params");
        if (params.size() > 0) spec.law_a = params.at(0).get<double>();
        if (params.size() > 1) spec.law_b = params.at(1).get<double>();
    }
    return spec;
}

}  // namespace discmark
