#pragma once

#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "ev/poly.hpp"
#include "ev/rational.hpp"
#include "ev/util.hpp"

namespace ev {

struct BFileEntry {
    long index = 0;
    Int value;
};

struct BFile {
    std::vector<BFileEntry> entries;
};

// Lines of "index value" with '#' comments and blank lines allowed; indices
// must step by exactly 1.
BFile parse_bfile(const std::string& text);
std::string serialize_bfile(const BFile& bf);

// How a triangle flattens into a b-file: row n >= first_n contributes the
// coefficients k = k_min .. n + k_max_offset (taking 0 past the degree).
struct Layout {
    long first_n = 0;
    long k_min = 0;
    long k_max_offset = 0;
};

struct TriangleMatch {
    std::string a_number;
    long offset = 0;       // index of the first b-file entry compared
    long rows_matched = 0; // complete rows that agreed
    bool full = false;     // every b-file entry agreed
    std::optional<std::tuple<long, long, std::string, std::string>> mismatch; // n, k, expected, got
};

// Walk the b-file against the layout-flattened rows; rows[i] is row
// rows_start + i. Stops at the first disagreement or when either side runs out.
TriangleMatch match_triangle(const std::vector<Poly>& rows, long rows_start, const BFile& bf,
                             const Layout& layout);

struct FetchOptions {
    std::string endpoint = "http://oeis.org";
    std::string cache_dir = "cache";
    std::string fixtures_dir;
    bool offline = false;
};

std::string bfile_filename(const std::string& a_number); // "A008292" -> "b008292.txt"

// Resolve the b-file text: vendored fixture, then cache, then (unless offline)
// a plain-http fetch that populates the cache.
std::string fetch_bfile(const std::string& a_number, const FetchOptions& opts);

} // namespace ev
