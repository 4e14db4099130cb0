#include "relutope/bit_vector.hpp"

#include "relutope/error.hpp"

namespace relutope {

BitVector BitVector::from_string(std::string_view text) {
    BitVector v(text.size());
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] == '1') {
            v.set(i);
        } else if (text[i] != '0') {
            throw Error(ErrorKind::parse, "bit string contains '" + std::string(1, text[i]) + "' at position " +
                                              std::to_string(i));
        }
    }
    return v;
}

std::string BitVector::to_string() const {
    std::string s(size_, '0');
    for (std::size_t i = 0; i < size_; ++i) {
        if (test(i)) s[i] = '1';
    }
    return s;
}

bool operator<(const BitVector& a, const BitVector& b) noexcept {
    if (a.size_ != b.size_) return a.size_ < b.size_;
    for (std::size_t w = 0; w < a.words_.size(); ++w) {
        const std::uint64_t x = a.words_[w] ^ b.words_[w];
        if (x == 0) continue;
        // Lowest differing bit decides: '0' sorts before '1'.
        const int bit = std::countr_zero(x);
        return ((a.words_[w] >> bit) & 1u) == 0;
    }
    return false;
}

const char* to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::usage: return "usage";
        case ErrorKind::parse: return "parse";
        case ErrorKind::dimension_mismatch: return "dimension mismatch";
        case ErrorKind::non_finite: return "non-finite value";
        case ErrorKind::infeasible: return "infeasible";
        case ErrorKind::degenerate: return "degenerate";
        case ErrorKind::resource_cap: return "resource cap";
        case ErrorKind::iteration_limit: return "iteration limit";
        case ErrorKind::io: return "i/o";
        case ErrorKind::internal: return "internal";
    }
    return "unknown";
}

}  // namespace relutope
