#pragma once

// Append-only cache of exact counts. Line format:
//
//   coperm-cache 1
//   <variant> <n> <kparam> <count> <fnv1a64-of-fields>
//
// Every line carries a checksum over its own fields; load() rejects the file
// loudly on any mismatch or malformed line.

#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>

#include "coperm/bigcount.hpp"
#include "coperm/counts.hpp"

namespace coperm {

class CacheError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline const char* variant_name(Variant v) {
    switch (v) {
        case Variant::C: return "C";
        case Variant::C0: return "C0";
        case Variant::Ck: return "Ck";
    }
    throw std::logic_error("variant_name: unknown variant");
}

inline std::optional<Variant> variant_from_name(const std::string& s) {
    if (s == "C") return Variant::C;
    if (s == "C0") return Variant::C0;
    if (s == "Ck") return Variant::Ck;
    return std::nullopt;
}

class CountCache {
public:
    static constexpr const char* kHeader = "coperm-cache 1";

    using Key = std::tuple<Variant, int, int>;  // (variant, n, kparam)

    static std::uint64_t line_checksum(const std::string& fields) {
        std::uint64_t h = 0xcbf29ce484222325ULL;
        for (unsigned char ch : fields) {
            h ^= ch;
            h *= 0x100000001b3ULL;
        }
        return h;
    }

    static std::string format_fields(Variant v, int n, int kparam, const BigCount& count) {
        std::ostringstream out;
        out << variant_name(v) << ' ' << n << ' ' << kparam << ' ' << to_decimal(count);
        return out.str();
    }

    /// Parse and checksum-validate a cache file; missing file -> empty cache.
    static CountCache load(const std::string& path) {
        CountCache cache;
        std::ifstream in(path);
        if (!in) return cache;
        std::string line;
        if (!std::getline(in, line) || line != kHeader)
            throw CacheError(path + ": bad or missing cache header");
        int lineno = 1;
        while (std::getline(in, line)) {
            ++lineno;
            if (line.empty()) continue;
            const auto space = line.rfind(' ');
            if (space == std::string::npos)
                throw CacheError(path + ": malformed line " + std::to_string(lineno));
            const std::string fields = line.substr(0, space);
            const std::string sum_text = line.substr(space + 1);
            std::uint64_t stored = 0;
            try {
                stored = std::stoull(sum_text, nullptr, 16);
            } catch (const std::exception&) {
                throw CacheError(path + ": bad checksum on line " + std::to_string(lineno));
            }
            if (stored != line_checksum(fields))
                throw CacheError(path + ": checksum mismatch on line " + std::to_string(lineno));

            std::istringstream fs(fields);
            std::string vname, count_text;
            int n = 0, kparam = 0;
            if (!(fs >> vname >> n >> kparam >> count_text))
                throw CacheError(path + ": malformed line " + std::to_string(lineno));
            const auto variant = variant_from_name(vname);
            if (!variant)
                throw CacheError(path + ": unknown variant on line " + std::to_string(lineno));
            cache.entries_[{*variant, n, kparam}] = BigCount(count_text);
        }
        return cache;
    }

    std::optional<BigCount> lookup(Variant v, int n, int kparam = 0) const {
        auto it = entries_.find({v, n, kparam});
        if (it == entries_.end()) return std::nullopt;
        return it->second;
    }

    bool contains(Variant v, int n, int kparam = 0) const {
        return entries_.count({v, n, kparam}) > 0;
    }

    std::size_t size() const { return entries_.size(); }

    /// Append one entry, creating the file (with header) if needed.
    static void append(const std::string& path, Variant v, int n, int kparam,
                       const BigCount& count) {
        const bool fresh = !std::ifstream(path).good();
        std::ofstream out(path, std::ios::app);
        if (!out) throw CacheError(path + ": cannot open for append");
        if (fresh) out << kHeader << '\n';
        const std::string fields = format_fields(v, n, kparam, count);
        std::ostringstream sum;
        sum << std::hex << line_checksum(fields);
        out << fields << ' ' << sum.str() << '\n';
    }

private:
    std::map<Key, BigCount> entries_;
};

}  // namespace coperm
