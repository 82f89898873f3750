#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "freegrad/trace.hpp"

namespace freegrad {

// Fixed trace schema, one row per iteration. Reals are rendered with 17
// significant digits so re-reading reconstructs the trace bit-exactly.
inline constexpr const char* kTraceCsvHeader =
    "t,k_t,gamma_k,h_t,eta_t,f_xt,grad_norm_sq,S_t,Gamma_sq,dist_to_x1,B_value";

std::string trace_to_csv(std::span<const TraceRecord> records);
std::vector<TraceRecord> trace_from_csv(const std::string& text);

void write_trace_csv(const std::filesystem::path& path,
                     std::span<const TraceRecord> records);
std::vector<TraceRecord> read_trace_csv(const std::filesystem::path& path);

}  // namespace freegrad
