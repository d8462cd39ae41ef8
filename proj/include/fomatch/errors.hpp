#pragma once

// Typed error hierarchy. Every precondition violation in the library throws
// one of these; catching fomatch::error catches them all.

#include <stdexcept>
#include <string>

namespace fomatch {

struct error : std::runtime_error {
    explicit error(const std::string& msg) : std::runtime_error(msg) {}
};

// --- instance construction / validation ---------------------------------
struct duplicate_edge : error { using error::error; };
struct self_loop : error { using error::error; };
struct missing_event : error { using error::error; };
struct fully_online_violation : error { using error::error; };
struct bipartition_violation : error { using error::error; };
struct not_at_deadline : error { using error::error; };
struct not_bipartite : error { using error::error; };
struct parse_error : error { using error::error; };

// --- engines -------------------------------------------------------------
struct capacity_out_of_range : error { using error::error; };
struct mismatched_outcome : error { using error::error; };
struct zero_opt : error { using error::error; };

// --- numerics ------------------------------------------------------------
struct domain_error : error { using error::error; };
struct quadrature_failure : error { using error::error; };
struct non_contraction : error { using error::error; };

// --- generators / analysis -----------------------------------------------
struct size_overflow : error { using error::error; };
struct too_large_for_exhaustive : error { using error::error; };
struct constancy_violation : error { using error::error; };

// --- tooling ---------------------------------------------------------------
struct io_error : error { using error::error; };

} // namespace fomatch
