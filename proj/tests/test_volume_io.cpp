#include <catch2/catch_amalgamated.hpp>

#include <cstring>
#include <fstream>

#include "pktseg/volume.hpp"
#include "pktseg/volume_io.hpp"

#include "test_util.hpp"

using namespace pktseg;
using pktseg_test::TempDir;

namespace {

// Writes header + payload by hand so loader tests do not depend on save_volume.
void write_raw_file(const std::filesystem::path& base, Dims dims, Spacing sp,
                    const std::string& dtype, const void* payload, std::size_t bytes) {
    std::ofstream hdr(base.string() + ".json");
    hdr << "{\"dims\":[" << dims.nx << "," << dims.ny << "," << dims.nz << "],"
        << "\"spacing_mm\":[" << sp.sx << "," << sp.sy << "," << sp.sz << "],"
        << "\"dtype\":\"" << dtype << "\",\"order\":\"x-fastest\"}";
    hdr.close();
    std::ofstream raw(base.string() + ".raw", std::ios::binary);
    raw.write(static_cast<const char*>(payload), static_cast<std::streamsize>(bytes));
}

}  // namespace

TEST_CASE("load_volume decodes a hand-written 2x2x2 file") {
    TempDir tmp("vio");
    const float ones[8] = {1, 1, 1, 1, 1, 1, 1, 1};
    write_raw_file(tmp / "v", {2, 2, 2}, {1, 1, 1}, "f32le", ones, sizeof(ones));

    const Volume3D vol = load_volume(tmp / "v.json");
    REQUIRE(vol.dims == Dims{2, 2, 2});
    REQUIRE(vol.spacing_mm == Spacing{1, 1, 1});
    for (float v : vol.values) REQUIRE(v == 1.0f);
}

TEST_CASE("load_volume rejects payloads that disagree with the header") {
    TempDir tmp("vio");
    std::vector<float> short_payload(26, 0.5f);  // header says 27
    write_raw_file(tmp / "v", {3, 3, 3}, {1, 1, 1}, "f32le", short_payload.data(),
                   short_payload.size() * 4);
    REQUIRE_THROWS_AS(load_volume(tmp / "v"), HeaderMismatch);
}

TEST_CASE("load_volume surfaces missing files and non-finite voxels") {
    TempDir tmp("vio");
    REQUIRE_THROWS_AS(load_volume(tmp / "absent"), MissingFile);

    float bad[8] = {0, 0, 0, std::numeric_limits<float>::quiet_NaN(), 0, 0, 0, 0};
    write_raw_file(tmp / "nan", {2, 2, 2}, {1, 1, 1}, "f32le", bad, sizeof(bad));
    REQUIRE_THROWS_AS(load_volume(tmp / "nan"), NonFiniteVoxel);

    // dtype disagreement is a header problem
    float fine[8] = {0};
    write_raw_file(tmp / "u8hdr", {2, 2, 2}, {1, 1, 1}, "u8", fine, 8);
    REQUIRE_THROWS_AS(load_volume(tmp / "u8hdr"), HeaderMismatch);
}

TEST_CASE("save_volume writes exactly 4 bytes per voxel") {
    TempDir tmp("vio");
    Volume3D vol({4, 4, 4}, {1, 1, 1}, 7.5f);
    save_volume(vol, tmp / "c");
    REQUIRE(std::filesystem::file_size(tmp / "c.raw") == 256);
}

TEST_CASE("save_volume refuses NaN") {
    TempDir tmp("vio");
    Volume3D vol({2, 2, 2}, {1, 1, 1}, 0.0f);
    vol.values[3] = std::numeric_limits<float>::infinity();
    REQUIRE_THROWS_AS(save_volume(vol, tmp / "bad"), NonFiniteVoxel);
}

TEST_CASE("volume save/load round-trips bitwise") {
    TempDir tmp("vio");
    SeededRng rng(7);
    for (int trial = 0; trial < 5; ++trial) {
        const Volume3D vol =
            pktseg_test::random_volume({8, 8, 8}, {0.86, 0.86, 0.86}, rng);
        save_volume(vol, tmp / ("r" + std::to_string(trial)));
        const Volume3D back = load_volume(tmp / ("r" + std::to_string(trial)));
        REQUIRE(back.dims == vol.dims);
        REQUIRE(back.spacing_mm == vol.spacing_mm);
        REQUIRE(std::memcmp(back.values.data(), vol.values.data(),
                            vol.values.size() * 4) == 0);
    }
}

TEST_CASE("mask save/load round-trips and rejects out-of-range labels") {
    TempDir tmp("vio");
    SeededRng rng(11);
    const LabelMask mask = pktseg_test::random_mask({6, 5, 4}, {1, 2, 3}, 0.3, rng);
    save_mask(mask, tmp / "m");
    const LabelMask back = load_mask(tmp / "m");
    REQUIRE(back.values == mask.values);
    REQUIRE(back.spacing_mm == mask.spacing_mm);

    std::vector<std::uint8_t> bad(8, 0);
    bad[2] = 2;
    write_raw_file(tmp / "bad", {2, 2, 2}, {1, 1, 1}, "u8", bad.data(), bad.size());
    REQUIRE_THROWS_AS(load_mask(tmp / "bad"), ParseError);
}

namespace {

Study make_grid_study(Dims dims) {
    Study s;
    s.study_id = "S01";
    s.patient_id = "P01";
    for (Sequence q : all_sequences()) s.sequences[q] = Volume3D(dims, {1, 1, 1}, 1.0f);
    s.gtv = LabelMask(dims, {1, 1, 1}, 0);
    return s;
}

}  // namespace

TEST_CASE("validate_study") {
    SECTION("clean study has no violations") {
        REQUIRE(validate_study(make_grid_study({4, 4, 4})).empty());
    }
    SECTION("one grid mismatch is reported for the offending sequence") {
        Study s = make_grid_study({4, 4, 4});
        s.sequences[Sequence::T2] = Volume3D({8, 8, 8}, {1, 1, 1});
        const auto v = validate_study(s);
        REQUIRE(v.size() == 1);
        REQUIRE(v[0].invariant == "grid-mismatch");
        REQUIRE(v[0].detail.find("T2") != std::string::npos);
    }
    SECTION("label value outside {0,1} is reported") {
        Study s = make_grid_study({4, 4, 4});
        s.gtv->values[9] = 2;
        const auto v = validate_study(s);
        REQUIRE(v.size() == 1);
        REQUIRE(v[0].invariant == "label-range");
    }
    SECTION("missing T1C is reported") {
        Study s = make_grid_study({4, 4, 4});
        s.sequences.erase(Sequence::T1C);
        const auto v = validate_study(s);
        REQUIRE(v.size() == 1);
        REQUIRE(v[0].invariant == "t1c-present");
    }
}

namespace {

// Builds a cohort of valid on-disk studies and returns the manifest JSON text.
std::string cohort_json(const TempDir& tmp, int n) {
    std::string json = "[\n";
    for (int i = 0; i < n; ++i) {
        const std::string id = "S0" + std::to_string(i + 1);
        std::filesystem::create_directories(tmp / id);
        Volume3D vol({2, 2, 2}, {1, 1, 1}, static_cast<float>(i));
        LabelMask gtv({2, 2, 2}, {1, 1, 1}, 0);
        for (const char* seq : {"t1", "t2", "t1c", "fl"})
            save_volume(vol, tmp.path() / id / seq);
        save_mask(gtv, tmp.path() / id / "gtv");
        json += std::string("{\"study_id\":\"") + id + "\",\"patient_id\":\"P01\"," +
                "\"t1\":\"" + id + "/t1.json\",\"t2\":\"" + id + "/t2.json\"," +
                "\"t1c\":\"" + id + "/t1c.json\",\"fl\":\"" + id + "/fl.json\"," +
                "\"gtv\":\"" + id + "/gtv.json\"}";
        json += (i + 1 < n) ? ",\n" : "\n";
    }
    return json + "]\n";
}

}  // namespace

TEST_CASE("load_manifest keeps file order and validates entries") {
    TempDir tmp("man");
    {
        std::ofstream out(tmp / "manifest.json");
        out << cohort_json(tmp, 3);
    }
    const DatasetManifest m = load_manifest(tmp / "manifest.json");
    REQUIRE(m.entries.size() == 3);
    REQUIRE(m.study_ids() == std::vector<std::string>{"S01", "S02", "S03"});

    const Study s = load_study(m.entries[1]);
    REQUIRE(s.study_id == "S02");
    REQUIRE(s.gtv.has_value());
    REQUIRE(s.sequence(Sequence::T1).values[0] == 1.0f);
}

TEST_CASE("load_manifest rejects duplicate ids, missing T1C, missing files") {
    TempDir tmp("man");
    std::string base = cohort_json(tmp, 2);

    SECTION("duplicate study_id") {
        std::string dup = base;
        const auto pos = dup.find("S02");
        while (dup.find("S02") != std::string::npos)
            dup.replace(dup.find("S02"), 3, "S01");
        std::ofstream(tmp / "manifest.json") << dup;
        REQUIRE_THROWS_AS(load_manifest(tmp / "manifest.json"), DuplicateStudyId);
        (void)pos;
    }
    SECTION("null t1c") {
        std::string bad = base;
        const std::string needle = "\"t1c\":\"S01/t1c.json\"";
        bad.replace(bad.find(needle), needle.size(), "\"t1c\":null");
        std::ofstream(tmp / "manifest.json") << bad;
        REQUIRE_THROWS_AS(load_manifest(tmp / "manifest.json"), MissingSequenceFile);
    }
    SECTION("referenced sequence file absent") {
        std::filesystem::remove(tmp / "S02" / "fl.json");
        std::ofstream(tmp / "manifest.json") << base;
        REQUIRE_THROWS_AS(load_manifest(tmp / "manifest.json"), MissingSequenceFile);
    }
    SECTION("malformed JSON") {
        std::ofstream(tmp / "manifest.json") << "{not json";
        REQUIRE_THROWS_AS(load_manifest(tmp / "manifest.json"), ParseError);
    }
}

TEST_CASE("manifest save/load round-trips entry order and null sequences") {
    TempDir tmp("man");
    {
        std::ofstream out(tmp / "manifest.json");
        out << cohort_json(tmp, 3);
    }
    DatasetManifest m = load_manifest(tmp / "manifest.json");
    // drop optional sequences from one entry
    m.entries[0].sequence_paths.erase(Sequence::T1);
    m.entries[0].sequence_paths.erase(Sequence::FL);
    save_manifest(m, tmp / "copy.json");
    const DatasetManifest back = load_manifest(tmp / "copy.json");
    REQUIRE(back.study_ids() == m.study_ids());
    REQUIRE(!back.entries[0].sequence_paths.count(Sequence::T1));
    REQUIRE(back.entries[0].sequence_paths.count(Sequence::T1C) == 1);
}
