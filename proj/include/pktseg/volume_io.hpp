#ifndef PKTSEG_VOLUME_IO_HPP
#define PKTSEG_VOLUME_IO_HPP

#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "pktseg/errors.hpp"
#include "pktseg/volume.hpp"

// On-disk volume format: a <name>.json sidecar
//   {"dims":[nx,ny,nz], "spacing_mm":[sx,sy,sz], "dtype":"f32le"|"u8", "order":"x-fastest"}
// next to <name>.raw holding exactly nx*ny*nz samples, little-endian, x-fastest.
// Loading inverts saving bitwise.

namespace pktseg {

static_assert(std::endian::native == std::endian::little,
              "raw payloads are little-endian; big-endian hosts are unsupported");

namespace detail {

/// Accepts "<base>", "<base>.json" or "<base>.raw" and returns "<base>".
inline std::filesystem::path volume_base_path(const std::filesystem::path& path) {
    const auto ext = path.extension().string();
    if (ext == ".json" || ext == ".raw") {
        auto base = path;
        base.replace_extension();
        return base;
    }
    return path;
}

struct VolumeHeader {
    Dims dims;
    Spacing spacing_mm;
    std::string dtype;
};

inline VolumeHeader read_header(const std::filesystem::path& json_path) {
    std::ifstream in(json_path);
    if (!in) throw MissingFile("cannot open header " + json_path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("bad volume header " + json_path.string() + ": " + e.what());
    }
    VolumeHeader h;
    try {
        h.dims = {j.at("dims").at(0).get<int>(), j.at("dims").at(1).get<int>(),
                  j.at("dims").at(2).get<int>()};
        h.spacing_mm = {j.at("spacing_mm").at(0).get<double>(),
                        j.at("spacing_mm").at(1).get<double>(),
                        j.at("spacing_mm").at(2).get<double>()};
        h.dtype = j.at("dtype").get<std::string>();
        if (j.at("order").get<std::string>() != "x-fastest")
            throw HeaderMismatch("unsupported voxel order in " + json_path.string());
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("bad volume header " + json_path.string() + ": " + e.what());
    }
    if (h.dims.nx <= 0 || h.dims.ny <= 0 || h.dims.nz <= 0)
        throw HeaderMismatch("non-positive dims in " + json_path.string());
    if (!h.spacing_mm.positive())
        throw HeaderMismatch("non-positive spacing in " + json_path.string());
    return h;
}

inline std::vector<char> read_payload(const std::filesystem::path& raw_path,
                                      std::int64_t expected_bytes) {
    std::ifstream in(raw_path, std::ios::binary);
    if (!in) throw MissingFile("cannot open payload " + raw_path.string());
    in.seekg(0, std::ios::end);
    const std::int64_t actual = static_cast<std::int64_t>(in.tellg());
    if (actual != expected_bytes)
        throw HeaderMismatch("payload " + raw_path.string() + " holds " +
                             std::to_string(actual) + " bytes, header implies " +
                             std::to_string(expected_bytes));
    in.seekg(0, std::ios::beg);
    std::vector<char> bytes(static_cast<std::size_t>(expected_bytes));
    in.read(bytes.data(), expected_bytes);
    if (!in) throw IoFailure("short read from " + raw_path.string());
    return bytes;
}

inline void write_header(const std::filesystem::path& json_path, Dims dims, Spacing sp,
                         const char* dtype) {
    nlohmann::json j;
    j["dims"] = {dims.nx, dims.ny, dims.nz};
    j["spacing_mm"] = {sp.sx, sp.sy, sp.sz};
    j["dtype"] = dtype;
    j["order"] = "x-fastest";
    std::ofstream out(json_path);
    if (!out) throw IoFailure("cannot write header " + json_path.string());
    out << j.dump(2) << '\n';
    if (!out) throw IoFailure("failed writing header " + json_path.string());
}

inline void write_payload(const std::filesystem::path& raw_path, const char* data,
                          std::size_t bytes) {
    std::ofstream out(raw_path, std::ios::binary);
    if (!out) throw IoFailure("cannot write payload " + raw_path.string());
    out.write(data, static_cast<std::streamsize>(bytes));
    if (!out) throw IoFailure("failed writing payload " + raw_path.string());
}

}  // namespace detail

inline Volume3D load_volume(const std::filesystem::path& path) {
    const auto base = detail::volume_base_path(path);
    const auto header = detail::read_header(base.string() + ".json");
    if (header.dtype != "f32le")
        throw HeaderMismatch("expected dtype f32le in " + base.string() + ".json, got '" +
                             header.dtype + "'");
    const auto bytes = detail::read_payload(base.string() + ".raw", header.dims.total() * 4);
    Volume3D vol(header.dims, header.spacing_mm);
    std::memcpy(vol.values.data(), bytes.data(), bytes.size());
    if (!vol.all_finite())
        throw NonFiniteVoxel("volume " + base.string() + " contains NaN or Inf voxels");
    return vol;
}

inline LabelMask load_mask(const std::filesystem::path& path) {
    const auto base = detail::volume_base_path(path);
    const auto header = detail::read_header(base.string() + ".json");
    if (header.dtype != "u8")
        throw HeaderMismatch("expected dtype u8 in " + base.string() + ".json, got '" +
                             header.dtype + "'");
    const auto bytes = detail::read_payload(base.string() + ".raw", header.dims.total());
    LabelMask mask(header.dims, header.spacing_mm);
    std::memcpy(mask.values.data(), bytes.data(), bytes.size());
    for (auto v : mask.values)
        if (v > 1)
            throw ParseError("mask " + base.string() + " contains voxel value " +
                             std::to_string(v) + "; labels must be 0 or 1");
    return mask;
}

inline void save_volume(const Volume3D& vol, const std::filesystem::path& path) {
    if (static_cast<std::int64_t>(vol.values.size()) != vol.dims.total())
        throw ShapeMismatch("volume value count differs from dims " + vol.dims.str());
    if (!vol.all_finite())
        throw NonFiniteVoxel("refusing to save volume with NaN or Inf voxels");
    const auto base = detail::volume_base_path(path);
    detail::write_header(base.string() + ".json", vol.dims, vol.spacing_mm, "f32le");
    detail::write_payload(base.string() + ".raw",
                          reinterpret_cast<const char*>(vol.values.data()),
                          vol.values.size() * 4);
}

inline void save_mask(const LabelMask& mask, const std::filesystem::path& path) {
    if (static_cast<std::int64_t>(mask.values.size()) != mask.dims.total())
        throw ShapeMismatch("mask value count differs from dims " + mask.dims.str());
    for (auto v : mask.values)
        if (v > 1)
            throw ParseError("refusing to save mask with voxel value " + std::to_string(v));
    const auto base = detail::volume_base_path(path);
    detail::write_header(base.string() + ".json", mask.dims, mask.spacing_mm, "u8");
    detail::write_payload(base.string() + ".raw",
                          reinterpret_cast<const char*>(mask.values.data()),
                          mask.values.size());
}

/// One manifest line: ids plus per-sequence file paths. Paths are stored as
/// written in the manifest; resolve_against() turns them absolute.
struct ManifestEntry {
    std::string study_id;
    std::string patient_id;
    std::map<Sequence, std::filesystem::path> sequence_paths;
    std::optional<std::filesystem::path> gtv_path;
};

struct DatasetManifest {
    std::vector<ManifestEntry> entries;

    std::vector<std::string> study_ids() const {
        std::vector<std::string> ids;
        ids.reserve(entries.size());
        for (const auto& e : entries) ids.push_back(e.study_id);
        return ids;
    }
    const ManifestEntry& entry(const std::string& study_id) const {
        for (const auto& e : entries)
            if (e.study_id == study_id) return e;
        throw Error("no study '" + study_id + "' in manifest");
    }
};

namespace detail {

inline std::filesystem::path resolve_against(const std::filesystem::path& dir,
                                             const std::filesystem::path& p) {
    return p.is_absolute() ? p : dir / p;
}

inline const char* sequence_key(Sequence s) {
    switch (s) {
        case Sequence::T1: return "t1";
        case Sequence::T2: return "t2";
        case Sequence::T1C: return "t1c";
        case Sequence::FL: return "fl";
    }
    return "?";
}

}  // namespace detail

/// Loads and validates a manifest: unique study ids, T1C path present, every
/// referenced file existing on disk. Paths in the result are resolved against
/// the manifest's directory. Entry order is preserved as written.
inline DatasetManifest load_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw MissingFile("cannot open manifest " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("bad manifest " + path.string() + ": " + e.what());
    }
    if (!j.is_array()) throw ParseError("manifest root must be a JSON array");

    const auto dir = path.parent_path();
    DatasetManifest manifest;
    std::set<std::string> seen;
    for (const auto& item : j) {
        ManifestEntry e;
        try {
            e.study_id = item.at("study_id").get<std::string>();
            e.patient_id = item.at("patient_id").get<std::string>();
        } catch (const nlohmann::json::exception& ex) {
            throw ParseError("manifest entry missing ids: " + std::string(ex.what()));
        }
        if (!seen.insert(e.study_id).second)
            throw DuplicateStudyId("study_id '" + e.study_id + "' appears twice");

        for (Sequence s : all_sequences()) {
            const char* key = detail::sequence_key(s);
            if (!item.contains(key) || item.at(key).is_null()) {
                if (s == Sequence::T1C)
                    throw MissingSequenceFile("study '" + e.study_id + "' has no t1c path");
                continue;
            }
            const auto p = detail::resolve_against(dir, item.at(key).get<std::string>());
            if (!std::filesystem::exists(detail::volume_base_path(p).string() + ".json"))
                throw MissingSequenceFile("study '" + e.study_id + "': " + key + " file " +
                                          p.string() + " does not exist");
            e.sequence_paths[s] = p;
        }
        if (item.contains("gtv") && !item.at("gtv").is_null()) {
            const auto p = detail::resolve_against(dir, item.at("gtv").get<std::string>());
            if (!std::filesystem::exists(detail::volume_base_path(p).string() + ".json"))
                throw MissingFile("study '" + e.study_id + "': gtv file " + p.string() +
                                  " does not exist");
            e.gtv_path = p;
        }
        manifest.entries.push_back(std::move(e));
    }
    return manifest;
}

/// Writes entries with paths exactly as stored (call with relative paths to get
/// a relocatable manifest). Sequences absent from an entry are written as null.
inline void save_manifest(const DatasetManifest& manifest, const std::filesystem::path& path) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& e : manifest.entries) {
        nlohmann::json item;
        item["study_id"] = e.study_id;
        item["patient_id"] = e.patient_id;
        for (Sequence s : all_sequences()) {
            auto it = e.sequence_paths.find(s);
            if (it == e.sequence_paths.end())
                item[detail::sequence_key(s)] = nullptr;
            else
                item[detail::sequence_key(s)] = it->second.generic_string();
        }
        item["gtv"] = e.gtv_path ? nlohmann::json(e.gtv_path->generic_string())
                                 : nlohmann::json(nullptr);
        j.push_back(item);
    }
    std::ofstream out(path);
    if (!out) throw IoFailure("cannot write manifest " + path.string());
    out << j.dump(2) << '\n';
    if (!out) throw IoFailure("failed writing manifest " + path.string());
}

/// Loads all referenced files of one entry into a Study (gtv included when
/// present) and checks the shared-grid invariants.
inline Study load_study(const ManifestEntry& entry) {
    Study study;
    study.study_id = entry.study_id;
    study.patient_id = entry.patient_id;
    for (const auto& [seq, p] : entry.sequence_paths) study.sequences[seq] = load_volume(p);
    if (entry.gtv_path) study.gtv = load_mask(*entry.gtv_path);
    const auto violations = validate_study(study);
    if (!violations.empty())
        throw HeaderMismatch("study '" + entry.study_id +
                             "' fails validation: " + violations.front().invariant + " (" +
                             violations.front().detail + ")");
    return study;
}

}  // namespace pktseg

#endif  // PKTSEG_VOLUME_IO_HPP
