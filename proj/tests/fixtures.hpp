// Shared builders and checkers for report-level tests.
#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "gramlex/report.hpp"

namespace fixtures {

/// A report with points for every aspect, built through the pipeline from
/// generated corpora.
gramlex::Report sample_report();

/// Broken local links, missing anchors and external references in every
/// .html file under `dir`.
std::vector<std::string> site_problems(const std::filesystem::path& dir);

/// A fresh empty directory under the system temp dir.
std::filesystem::path scratch_dir(const std::string& name);

}  // namespace fixtures
