#include "lbp/configuration.hpp"

#include <algorithm>
#include <sstream>

#include "lbp/errors.hpp"

namespace lbp {

int64_t SeenFromTip::total() const {
    int64_t s = 0;
    for (int32_t v : values) s += v;
    return s;
}

uint64_t SeenFromTip::hash() const {
    uint64_t h = 1469598103934665603ULL;
    for (int32_t v : values) {
        h ^= static_cast<uint64_t>(static_cast<uint32_t>(v));
        h *= 1099511628211ULL;
    }
    return h;
}

Configuration::Configuration(int32_t cap) : cap_(cap) {
    if (cap < 1) throw Error("cap must be at least 1");
}

Configuration::Configuration(int64_t origin, std::vector<int32_t> cells, int32_t cap)
    : cap_(cap) {
    if (cap < 1) throw Error("cap must be at least 1");
    for (int32_t v : cells) {
        if (v < 0 || v > cap) throw Error("occupancy outside [0, cap]");
        mass_ += v;
    }
    // Trim to a tight window.
    size_t lo = 0, hi = cells.size();
    while (lo < hi && cells[lo] == 0) ++lo;
    while (hi > lo && cells[hi - 1] == 0) --hi;
    if (lo == hi) {
        origin_ = 0;
        return;
    }
    origin_ = origin + static_cast<int64_t>(lo);
    len_ = hi - lo;
    buf_.assign(cells.begin() + static_cast<std::ptrdiff_t>(lo),
                cells.begin() + static_cast<std::ptrdiff_t>(hi));
    begin_ = 0;
}

Configuration Configuration::singleton(int32_t cap) {
    Configuration c(cap);
    c.increment(0);
    return c;
}

int32_t Configuration::occupancy(int64_t site) const {
    const int64_t idx = site - origin_;
    if (empty() || idx < 0 || idx >= static_cast<int64_t>(len_)) return 0;
    return buf_[begin_ + static_cast<size_t>(idx)];
}

int64_t Configuration::tip() const {
    if (empty()) throw EmptyConfigurationError();
    return origin_ + static_cast<int64_t>(len_) - 1;
}

int64_t Configuration::leftmost() const {
    if (empty()) throw EmptyConfigurationError();
    return origin_;
}

std::vector<int64_t> Configuration::occupied() const {
    std::vector<int64_t> out;
    for (size_t i = 0; i < len_; ++i)
        if (buf_[begin_ + i] > 0) out.push_back(origin_ + static_cast<int64_t>(i));
    return out;
}

void Configuration::reserve_side(bool left, size_t needed) {
    const size_t avail = left ? begin_ : buf_.size() - begin_ - len_;
    if (avail >= needed) return;
    // Reallocate with slack on both sides, doubling amortized.
    const size_t slack = std::max<size_t>(needed, std::max<size_t>(len_, 8));
    std::vector<int32_t> nb(len_ + 2 * slack, 0);
    std::copy(buf_.begin() + static_cast<std::ptrdiff_t>(begin_),
              buf_.begin() + static_cast<std::ptrdiff_t>(begin_ + len_),
              nb.begin() + static_cast<std::ptrdiff_t>(slack));
    buf_ = std::move(nb);
    begin_ = slack;
}

void Configuration::increment(int64_t site) {
    if (empty()) {
        buf_.assign(8, 0);
        begin_ = 3;
        len_ = 1;
        origin_ = site;
        buf_[begin_] = 1;
        mass_ = 1;
        return;
    }
    int64_t idx = site - origin_;
    if (idx < 0) {
        const size_t grow = static_cast<size_t>(-idx);
        reserve_side(true, grow);
        begin_ -= grow;
        len_ += grow;
        origin_ = site;
        idx = 0;
    } else if (idx >= static_cast<int64_t>(len_)) {
        const size_t grow = static_cast<size_t>(idx) - len_ + 1;
        reserve_side(false, grow);
        len_ += grow;
    }
    int32_t& cell = buf_[begin_ + static_cast<size_t>(idx)];
    if (cell < cap_) {
        ++cell;
        ++mass_;
    }
    // At cap the configuration is unchanged. A grown window is tight:
    // growth only happens for sites outside the old window, which were
    // empty (below cap), so the new boundary cell was just set to 1.
}

Configuration Configuration::shifted(int64_t offset) const {
    Configuration out = *this;
    out.origin_ += offset;
    if (out.empty()) out.origin_ = 0;
    return out;
}

Configuration Configuration::mirrored() const {
    Configuration out(cap_);
    if (empty()) return out;
    std::vector<int32_t> cells(len_);
    for (size_t i = 0; i < len_; ++i) cells[i] = buf_[begin_ + len_ - 1 - i];
    return Configuration(-tip(), std::move(cells), cap_);
}

SeenFromTip Configuration::seen_from_tip(int32_t range) const {
    if (empty()) throw EmptyConfigurationError();
    if (range < 1) throw Error("range must be at least 1");
    SeenFromTip out;
    out.cap = cap_;
    out.range = range;

    // Walk down from the tip; stop just above the first run of `range`
    // saturated sites that starts strictly below the tip.
    const size_t n = len_;
    size_t keep = n;  // number of depths retained before zero-stripping
    int32_t run = 0;
    for (size_t d = 1; d < n; ++d) {
        const int32_t v = buf_[begin_ + (n - 1 - d)];
        run = (v == cap_) ? run + 1 : 0;
        if (run == range) {
            keep = d - static_cast<size_t>(range) + 1;
            break;
        }
    }
    out.values.resize(keep);
    for (size_t d = 0; d < keep; ++d) out.values[d] = buf_[begin_ + (n - 1 - d)];
    while (out.values.size() > 1 && out.values.back() == 0) out.values.pop_back();
    return out;
}

std::string Configuration::to_line() const {
    std::ostringstream os;
    if (empty()) {
        os << "0:";
        return os.str();
    }
    os << origin_ << ':';
    for (size_t i = 0; i < len_; ++i) os << ' ' << buf_[begin_ + i];
    return os.str();
}

Configuration Configuration::from_line(const std::string& line, int32_t cap) {
    const size_t colon = line.find(':');
    if (colon == std::string::npos) throw ParseError("snapshot line missing ':'");
    int64_t origin = 0;
    try {
        origin = std::stoll(line.substr(0, colon));
    } catch (const std::exception&) {
        throw ParseError("bad origin in snapshot line");
    }
    std::vector<int32_t> cells;
    std::istringstream is(line.substr(colon + 1));
    long long v = 0;
    while (is >> v) cells.push_back(static_cast<int32_t>(v));
    if (!is.eof()) throw ParseError("bad occupancy in snapshot line");
    return Configuration(origin, std::move(cells), cap);
}

bool Configuration::operator==(const Configuration& other) const {
    if (cap_ != other.cap_ || len_ != other.len_) return false;
    if (empty()) return true;
    if (origin_ != other.origin_) return false;
    for (size_t i = 0; i < len_; ++i)
        if (buf_[begin_ + i] != other.buf_[other.begin_ + i]) return false;
    return true;
}

}  // namespace lbp
