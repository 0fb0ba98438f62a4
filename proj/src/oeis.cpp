#include "ev/oeis.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include "httplib.h"

namespace ev {

BFile parse_bfile(const std::string& text) {
    BFile bf;
    std::istringstream in(text);
    std::string line;
    long lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        size_t pos = line.find_first_not_of(" \t");
        if (pos == std::string::npos || line[pos] == '#') continue;
        std::istringstream ls(line.substr(pos));
        long idx;
        std::string val;
        if (!(ls >> idx >> val)) throw IoError("b-file parse error at line " + std::to_string(lineno));
        std::string rest;
        if (ls >> rest) throw IoError("b-file parse error at line " + std::to_string(lineno) +
                                      ": trailing content");
        Int v;
        try {
            v = Int(val);
        } catch (const std::invalid_argument&) {
            throw IoError("b-file parse error at line " + std::to_string(lineno) +
                          ": bad value '" + val + "'");
        }
        if (!bf.entries.empty() && idx != bf.entries.back().index + 1)
            throw IoError("b-file parse error at line " + std::to_string(lineno) +
                          ": index " + std::to_string(idx) + " does not follow " +
                          std::to_string(bf.entries.back().index));
        bf.entries.push_back({idx, v});
    }
    if (bf.entries.empty()) throw IoError("b-file has no entries");
    return bf;
}

std::string serialize_bfile(const BFile& bf) {
    std::string out;
    for (const auto& e : bf.entries) {
        out += std::to_string(e.index);
        out += ' ';
        out += e.value.get_str();
        out += '\n';
    }
    return out;
}

TriangleMatch match_triangle(const std::vector<Poly>& rows, long rows_start, const BFile& bf,
                             const Layout& layout) {
    TriangleMatch tm;
    if (bf.entries.empty()) return tm;
    tm.offset = bf.entries.front().index;
    size_t pos = 0;
    long n = layout.first_n;
    while (pos < bf.entries.size()) {
        long i = n - rows_start;
        if (i < 0 || i >= static_cast<long>(rows.size())) break;
        const Poly& row = rows[static_cast<size_t>(i)];
        long k_hi = n + layout.k_max_offset;
        bool row_complete = true;
        for (long k = layout.k_min; k <= k_hi && pos < bf.entries.size(); ++k) {
            Rational c = k >= 0 ? row.coeff(static_cast<size_t>(k)) : Rational(0);
            const BFileEntry& e = bf.entries[pos];
            bool same = is_integer(c) && c.get_num() == e.value;
            if (!same) {
                tm.mismatch = std::make_tuple(n, k, e.value.get_str(), to_string(c));
                return tm;
            }
            ++pos;
            if (k < k_hi && pos >= bf.entries.size()) row_complete = false;
        }
        if (row_complete && n >= layout.first_n) ++tm.rows_matched;
        ++n;
    }
    tm.full = pos == bf.entries.size();
    return tm;
}

std::string bfile_filename(const std::string& a_number) {
    return "b" + a_number.substr(1) + ".txt";
}

namespace {

std::optional<std::string> read_file_if_exists(const std::filesystem::path& p) {
    std::error_code ec;
    if (!std::filesystem::exists(p, ec) || ec) return std::nullopt;
    std::ifstream in(p, std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

void write_file_atomic(const std::filesystem::path& p, const std::string& text) {
    std::error_code ec;
    std::filesystem::create_directories(p.parent_path(), ec);
    std::filesystem::path tmp = p;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot write " + tmp.string());
        out << text;
        if (!out) throw IoError("short write to " + tmp.string());
    }
    std::filesystem::rename(tmp, p, ec);
    if (ec) throw IoError("cannot move " + tmp.string() + " into place: " + ec.message());
}

} // namespace

std::string fetch_bfile(const std::string& a_number, const FetchOptions& opts) {
    static const std::regex a_re("^A[0-9]{6}$");
    if (!std::regex_match(a_number, a_re))
        throw IoError("invalid sequence id '" + a_number + "' (expected Annnnnn)");
    std::string fname = bfile_filename(a_number);

    if (!opts.fixtures_dir.empty()) {
        if (auto text = read_file_if_exists(std::filesystem::path(opts.fixtures_dir) / fname))
            return *text;
    }
    std::filesystem::path cache_path = std::filesystem::path(opts.cache_dir) / fname;
    if (auto text = read_file_if_exists(cache_path)) return *text;
    if (opts.offline)
        throw IoError("offline and " + fname + " is neither vendored nor cached");

    std::string ep = opts.endpoint;
    if (ep.rfind("https://", 0) == 0)
        throw IoError("https endpoints are not supported; use a plain-http mirror");
    if (ep.rfind("http://", 0) != 0)
        throw IoError("endpoint must start with http://");
    ep = ep.substr(7);
    std::string prefix;
    if (size_t slash = ep.find('/'); slash != std::string::npos) {
        prefix = ep.substr(slash);
        if (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
        ep = ep.substr(0, slash);
    }
    std::string host = ep;
    int port = 80;
    if (size_t colon = ep.find(':'); colon != std::string::npos) {
        host = ep.substr(0, colon);
        try {
            port = std::stoi(ep.substr(colon + 1));
        } catch (const std::exception&) {
            throw IoError("bad endpoint port in '" + opts.endpoint + "'");
        }
    }
    httplib::Client client(host, port);
    client.set_connection_timeout(10);
    client.set_read_timeout(30);
    std::string path = prefix + "/" + a_number + "/" + fname;
    auto res = client.Get(path);
    if (!res)
        throw IoError("fetch of " + path + " from " + host + " failed: " +
                      httplib::to_string(res.error()));
    if (res->status != 200)
        throw IoError("fetch of " + path + " from " + host + " returned status " +
                      std::to_string(res->status));
    write_file_atomic(cache_path, res->body);
    return res->body;
}

} // namespace ev
