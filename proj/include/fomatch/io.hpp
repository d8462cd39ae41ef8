#pragma once

// Text formats.
//
// Instance format (diffable, canonical field order):
//   fom 1 <n> <m>
//   bipartition <flag_0> ... <flag_{n-1}>     (optional)
//   A <id> | D <id>                           (2n lines, timeline order)
//   E <u> <v>                                 (m lines, normalized u<v, sorted)
// Lines starting with '#' are ignored on load so tools may prepend metadata.
//
// Edge-arrival trace format: header `eat 1 <n> <m>`, then at each deadline
// the edges to still-available neighbors (`E <u> <v>`, ascending neighbor id)
// followed by the `D <u>` marker.  Composing with a random relabel yields the
// randomized revelation order the adversarial reduction uses.

#include <charconv>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "fomatch/instance.hpp"

namespace fomatch {

inline std::string serialize_instance(const instance& inst) {
    std::ostringstream out;
    out << "fom 1 " << inst.n << ' ' << inst.edges.size() << '\n';
    if (inst.bipartite()) {
        out << "bipartition";
        for (auto f : inst.side) out << ' ' << static_cast<int>(f);
        out << '\n';
    }
    for (const event& e : inst.timeline)
        out << (e.kind == event_kind::arrival ? 'A' : 'D') << ' ' << e.v << '\n';
    for (const auto& [u, v] : inst.edges) out << "E " << u << ' ' << v << '\n';
    return out.str();
}

namespace detail {

inline long long parse_int(std::string_view tok, std::size_t line_no, const char* field) {
    long long value = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc{} || ptr != tok.data() + tok.size())
        throw parse_error("line " + std::to_string(line_no) + ": bad " + field +
                          " '" + std::string(tok) + "'");
    return value;
}

inline std::vector<std::string_view> split_ws(std::string_view line) {
    std::vector<std::string_view> toks;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
        if (j > i) toks.push_back(line.substr(i, j - i));
        i = j;
    }
    return toks;
}

} // namespace detail

inline instance load_instance(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        lines.push_back(text.substr(start, end - start));
        if (end == text.size()) break;
        start = end + 1;
    }
    std::size_t li = 0;
    auto next_line = [&]() -> std::string_view {
        while (li < lines.size()) {
            std::string_view l = lines[li++];
            if (l.empty() || l[0] == '#') continue;
            return l;
        }
        return {};
    };

    std::string_view header = next_line();
    auto htoks = detail::split_ws(header);
    if (htoks.size() != 4 || htoks[0] != "fom" || htoks[1] != "1")
        throw parse_error("line " + std::to_string(li) + ": expected header 'fom 1 <n> <m>'");
    long long n = detail::parse_int(htoks[2], li, "vertex count");
    long long m = detail::parse_int(htoks[3], li, "edge count");
    if (n < 0 || m < 0)
        throw parse_error("line " + std::to_string(li) + ": negative count in header");

    std::vector<std::uint8_t> side;
    std::vector<event> timeline;
    std::vector<std::pair<vertex_id, vertex_id>> edges;
    timeline.reserve(2 * n);
    edges.reserve(m);

    std::size_t events_seen = 0, edges_seen = 0;
    bool first_body_line = true;
    for (;;) {
        std::string_view line = next_line();
        if (line.empty()) break;
        auto toks = detail::split_ws(line);
        if (toks.empty()) continue;
        if (first_body_line && toks[0] == "bipartition") {
            if (toks.size() != static_cast<std::size_t>(n) + 1)
                throw parse_error("line " + std::to_string(li) +
                                  ": bipartition must list one flag per vertex");
            for (std::size_t i = 1; i < toks.size(); ++i) {
                long long f = detail::parse_int(toks[i], li, "bipartition flag");
                if (f != 0 && f != 1)
                    throw parse_error("line " + std::to_string(li) + ": bipartition flag must be 0 or 1");
                side.push_back(static_cast<std::uint8_t>(f));
            }
            first_body_line = false;
            continue;
        }
        first_body_line = false;
        if (toks[0] == "A" || toks[0] == "D") {
            if (toks.size() != 2)
                throw parse_error("line " + std::to_string(li) + ": event line needs one vertex id");
            long long v = detail::parse_int(toks[1], li, "vertex id");
            timeline.push_back({toks[0] == "A" ? event_kind::arrival : event_kind::deadline,
                                static_cast<vertex_id>(v)});
            ++events_seen;
        } else if (toks[0] == "E") {
            if (toks.size() != 3)
                throw parse_error("line " + std::to_string(li) + ": edge line needs two vertex ids");
            long long u = detail::parse_int(toks[1], li, "vertex id");
            long long v = detail::parse_int(toks[2], li, "vertex id");
            edges.emplace_back(static_cast<vertex_id>(u), static_cast<vertex_id>(v));
            ++edges_seen;
        } else {
            throw parse_error("line " + std::to_string(li) + ": unknown record '" +
                              std::string(toks[0]) + "'");
        }
    }
    if (events_seen != static_cast<std::size_t>(2 * n))
        throw parse_error("expected " + std::to_string(2 * n) + " event lines, found " +
                          std::to_string(events_seen));
    if (edges_seen != static_cast<std::size_t>(m))
        throw parse_error("expected " + std::to_string(m) + " edge lines, found " +
                          std::to_string(edges_seen));
    return build_instance(static_cast<vertex_id>(n), std::move(edges), std::move(timeline),
                          std::move(side));
}

// Linearizes an instance into the edge-arrival sequence: each edge is
// revealed at the deadline of its earlier endpoint (when the other side is
// still available), grouped per deadline in ascending neighbor id.
inline std::string edge_arrival_trace(const instance& inst) {
    std::ostringstream out;
    out << "eat 1 " << inst.n << ' ' << inst.edges.size() << '\n';
    for (std::size_t step = 0; step < inst.timeline.size(); ++step) {
        const event& e = inst.timeline[step];
        if (e.kind != event_kind::deadline) continue;
        for (vertex_id w : available_neighbors(inst, e.v, static_cast<std::int32_t>(step)))
            out << "E " << e.v << ' ' << w << '\n';
        out << "D " << e.v << '\n';
    }
    return out.str();
}

} // namespace fomatch
