#ifndef PKTSEG_TEST_UTIL_HPP
#define PKTSEG_TEST_UTIL_HPP

#include <atomic>
#include <filesystem>
#include <string>

#include "pktseg/rng.hpp"
#include "pktseg/volume.hpp"

namespace pktseg_test {

/// Scratch directory removed on scope exit.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        static std::atomic<int> counter{0};
        path_ = std::filesystem::temp_directory_path() /
                ("pktseg_" + tag + "_" + std::to_string(counter++) + "_" +
                 std::to_string(::getpid()));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

inline pktseg::Volume3D random_volume(pktseg::Dims dims, pktseg::Spacing sp,
                                      pktseg::SeededRng& rng) {
    pktseg::Volume3D v(dims, sp);
    for (auto& x : v.values) x = static_cast<float>(rng.uniform(-10.0, 10.0));
    return v;
}

inline pktseg::LabelMask random_mask(pktseg::Dims dims, pktseg::Spacing sp, double p_fg,
                                     pktseg::SeededRng& rng) {
    pktseg::LabelMask m(dims, sp);
    for (auto& x : m.values) x = rng.uniform01() < p_fg ? 1 : 0;
    return m;
}

}  // namespace pktseg_test

#endif  // PKTSEG_TEST_UTIL_HPP
