#pragma once

// Versioned JSON reports. Finite-engine reports carry no timestamp, so equal
// inputs give byte-identical documents.

#include "bellman/control_system.hpp"
#include "bellman/mc/poisson_drift.hpp"
#include "bellman/mc/switching.hpp"
#include "bellman/mc/verification.hpp"
#include "bellman/process_campaign.hpp"

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace bellman::io {

inline constexpr const char* kReportSchema = "bellman-report/1";

std::string tool_version();

std::string sha256_hex(std::string_view data);

struct VerifyOptions {
    /// Treat a failure of the (0, +inf) lattice property as a failed check.
    bool require_lattice = false;
    /// Lattice checks enumerate events; classes whose field has more atoms are skipped.
    std::size_t lattice_atom_limit = 16;
};

struct VerifyResult {
    /// Validation, B1-B5 and lattice implications all passed.
    bool passed = false;
    bool validation_passed = false;
    std::string value;
    std::vector<std::string> optimal;
    std::string document;
};

/// Validates, adds the times 0 and infinity when absent, then runs the lattice
/// checks, solve and verify_bellman.
VerifyResult run_verify(const control::FiniteControlSystem& sys, std::string_view input_text,
                        const std::string& input_name, const VerifyOptions& options = {});

std::string campaign_document(const process::CampaignOptions& options, const process::CampaignReport& report);

struct SwitchingRun {
    std::string strategy;
    mc::SwitchingConfig config;
    mc::SwitchingEstimate estimate;
    double target = 0.0;
    double allowance = 0.0;
    bool passed = false;
};

std::string switching_document(const std::vector<SwitchingRun>& runs);
std::string study_document(const mc::SwitchingConfig& cfg, const mc::ConvergenceStudy& study, double target,
                           bool passed);
std::string poisson_document(const mc::PoissonDriftConfig& cfg, const mc::PoissonDriftReport& report, bool passed);
std::string verification_document(const std::string& label, const mc::VerificationReport& report);

}  // namespace bellman::io
