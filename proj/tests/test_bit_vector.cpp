#include "doctest.h"
#include "relutope/bit_vector.hpp"
#include "relutope/error.hpp"

#include <random>
#include <unordered_set>

using relutope::BitVector;

TEST_CASE("string round trip across word boundaries") {
    std::mt19937_64 rng(3);
    for (std::size_t len : {1u, 63u, 64u, 65u, 130u}) {
        std::string s;
        for (std::size_t i = 0; i < len; ++i) s.push_back(rng() & 1 ? '1' : '0');
        const BitVector v = BitVector::from_string(s);
        CHECK(v.size() == len);
        CHECK(v.to_string() == s);
        std::size_t ones = 0;
        for (char ch : s) ones += ch == '1';
        CHECK(v.popcount() == ones);
    }
}

TEST_CASE("bit 0 is the first character") {
    BitVector v(5);
    v.set(0);
    v.set(3);
    CHECK(v.to_string() == "10010");
    CHECK(v.flipped(3).to_string() == "10000");
    CHECK(v.test(3));
    v.set(3, false);
    CHECK_FALSE(v.test(3));
}

TEST_CASE("malformed strings are rejected") {
    CHECK_THROWS_AS(BitVector::from_string("01a1"), relutope::Error);
    try {
        BitVector::from_string("012");
    } catch (const relutope::Error& e) {
        CHECK(e.kind() == relutope::ErrorKind::parse);
    }
}

TEST_CASE("ordering follows the 0/1 strings") {
    std::vector<std::string> strings{"0110", "0000", "1000", "0111", "1111", "0001"};
    std::vector<BitVector> vs;
    for (const auto& s : strings) vs.push_back(BitVector::from_string(s));
    std::sort(vs.begin(), vs.end());
    std::sort(strings.begin(), strings.end());
    for (std::size_t i = 0; i < vs.size(); ++i) CHECK(vs[i].to_string() == strings[i]);
    CHECK(BitVector::from_string("111") < BitVector::from_string("0000"));
}

TEST_CASE("hash separates distinct vectors") {
    std::unordered_set<BitVector, relutope::BitVectorHash> set;
    for (int code = 0; code < 256; ++code) {
        BitVector v(8);
        for (int i = 0; i < 8; ++i) v.set(static_cast<std::size_t>(i), (code >> i) & 1);
        set.insert(v);
    }
    CHECK(set.size() == 256);
}
