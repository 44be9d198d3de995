#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace lbp {

// Configuration seen from its rightmost occupied site, truncated at the
// first run of `range` consecutive saturated sites below the tip.
// values[d] is the occupancy at depth d below the tip; values[0] >= 1 and
// the last entry is nonzero. A single-entry value is the renewal state:
// nothing visible above the truncation block.
struct SeenFromTip {
    std::vector<int32_t> values;
    int32_t cap = 1;
    int32_t range = 1;

    bool operator==(const SeenFromTip&) const = default;

    size_t depth() const { return values.size(); }
    int64_t total() const;
    bool is_renewal() const { return values.size() == 1; }
    uint64_t hash() const;  // FNV-1a over the value sequence
};

// Occupancy configuration on the one-dimensional integer lattice with a
// per-site cap. Stored as a tight window: sites outside it are empty, and
// for a nonempty configuration both boundary cells are occupied. The
// physical buffer keeps slack on both sides so that support growth is
// amortized O(1) per added site.
class Configuration {
public:
    explicit Configuration(int32_t cap);
    Configuration(int64_t origin, std::vector<int32_t> cells, int32_t cap);

    // One particle at the origin.
    static Configuration singleton(int32_t cap);

    int32_t cap() const { return cap_; }
    bool empty() const { return len_ == 0; }
    int64_t mass() const { return mass_; }

    int32_t occupancy(int64_t site) const;

    // Rightmost / leftmost occupied site; throws EmptyConfigurationError.
    int64_t tip() const;
    int64_t leftmost() const;

    std::vector<int64_t> occupied() const;

    // Adds one particle at `site`; no-op when the site is at cap.
    void increment(int64_t site);

    Configuration shifted(int64_t offset) const;
    Configuration mirrored() const;  // site x -> -x

    SeenFromTip seen_from_tip(int32_t range) const;

    // Window accessors (origin is meaningful only when nonempty).
    int64_t window_origin() const { return origin_; }
    size_t window_size() const { return len_; }

    // Snapshot line "origin: v v v ..." (empty configuration: "0:").
    std::string to_line() const;
    static Configuration from_line(const std::string& line, int32_t cap);

    bool operator==(const Configuration& other) const;

private:
    void reserve_side(bool left, size_t needed);

    std::vector<int32_t> buf_;
    size_t begin_ = 0;  // window start inside buf_
    size_t len_ = 0;    // window length
    int64_t origin_ = 0;  // lattice index of buf_[begin_]
    int64_t mass_ = 0;
    int32_t cap_ = 1;
};

}  // namespace lbp
