#include <doctest.h>

#include <json.hpp>

#include "discmark/artifact.hpp"
#include "discmark/harness.hpp"

using namespace discmark;

TEST_CASE("bit packing is MSB-first") {
    const bit_string bits = bit_string::from_string01("10110011101");
    const auto packed = bits.packed_msb_first();
    REQUIRE(packed.size() == 2);
    CHECK(packed[0] == 0b10110011);
    CHECK(packed[1] == 0b10100000);
    CHECK(bit_string::from_packed(packed, 11) == bits);
}

TEST_CASE("window pads on the left") {
    const bit_string bits = bit_string::from_string01("1101");
    CHECK(bits.window(6).to_string01() == "001101");
    CHECK(bits.window(2).to_string01() == "01");
    CHECK(bit_string{}.window(3).to_string01() == "000");
}

TEST_CASE("base64 round trip and known vector") {
    CHECK(base64_encode({'M', 'a', 'n'}) == "TWFu");
    CHECK(base64_encode({'M', 'a'}) == "TWE=");
    CHECK(base64_encode({'M'}) == "TQ==");
    std::vector<uint8_t> data;
    for (int i = 0; i < 300; ++i) data.push_back(static_cast<uint8_t>(i * 7));
    CHECK(base64_decode(base64_encode(data)) == data);
}

TEST_CASE("text artifact JSON round trip") {
    text_artifact artifact;
    artifact.scheme = "disc";
    artifact.text.bits = bit_string::from_string01("110100101100111010");
    artifact.text.initial_chunk_len = 5;
    artifact.text.watermark_applied = true;
    artifact.payload_bits = 4;
    artifact.has_message = true;
    artifact.message = 11;

    const auto j = to_json(artifact);
    CHECK(j.at("schema_version") == kSchemaVersion);
    const auto back = text_artifact_from_json(j);
    CHECK(back.scheme == artifact.scheme);
    CHECK(back.text.bits == artifact.text.bits);
    CHECK(back.text.initial_chunk_len == 5);
    CHECK(back.payload_bits == 4);
    CHECK(back.has_message);
    CHECK(back.message == 11);
}

TEST_CASE("detection report JSON carries every field") {
    disc_detection_report rep;
    rep.is_watermarked = true;
    rep.global_p_value = 1e-7;
    rep.n_star = 42;
    rep.best_score = 123.5;
    rep.dedup_count = 99;
    rep.m_star = 6;
    rep.delta_star = 0.375;
    rep.search_evaluations = 350;
    rep.p_floor = 0.5;
    rep.p_floor_active = true;
    const auto j = to_json(rep);
    for (const char* field : {"is_watermarked", "global_p_value", "n_star", "best_score",
                              "dedup_count", "m_star", "delta_star", "search_evaluations",
                              "p_floor", "p_floor_active"})
        CHECK(j.contains(field));
}

TEST_CASE("model spec JSON round trip") {
    simulated_model_spec spec;
    spec.seed = 77;
    spec.length_bits = 340;
    spec.law = probability_law::beta;
    spec.law_a = 2.0;
    spec.law_b = 3.0;
    const auto back = simulated_model_spec_from_json(to_json(spec));
    CHECK(back.seed == 77);
    CHECK(back.length_bits == 340);
    CHECK(back.law == probability_law::beta);
    CHECK(back.law_a == 2.0);
    CHECK(back.law_b == 3.0);
}

TEST_CASE("experiment spec JSON round trip keeps overrides") {
    experiment_spec spec;
    spec.kind = "ber_sweep";
    spec.trials = 123;
    spec.token_lengths = {1, 6};
    spec.payload_bits_list = {1, 4};
    spec.decode_mode = "both";
    spec.law = probability_law::fixed;
    spec.law_a = 0.5;
    const auto back = experiment_spec_from_json(to_json(spec));
    CHECK(back.kind == "ber_sweep");
    CHECK(back.trials == 123);
    CHECK(back.token_lengths == std::vector<std::size_t>{1, 6});
    CHECK(back.payload_bits_list == std::vector<unsigned>{1, 4});
    CHECK(back.decode_mode == "both");
    CHECK(back.law == probability_law::fixed);
    CHECK(back.law_a == 0.5);
}
