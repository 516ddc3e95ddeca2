#pragma once

#include <krylov/algebra.hpp>

#include <nlohmann/json.hpp>

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace krylov::app {

enum class Mode { complexity, variance, distribution, autocorrelator, lanczos, verify };
enum class Method { closed_form, oracle, lanczos_chain };
enum class Format { csv, json };

std::string to_string(Mode m);
std::string to_string(Method m);
Mode parse_mode(const std::string& s);
Method parse_method(const std::string& s);

struct SweepConfig {
	double alpha = 1.0;
	double beta = 1.0;
	double t_min = 0.0;
	double t_max = 1.0;
	int steps = 11;
	int dim = 256;
	double tol = 1e-10;
	Mode mode = Mode::complexity;
	Format format = Format::csv;
	std::string out; // empty: stdout

	// Methods evaluated per grid point; empty selects the mode's default.
	std::vector<Method> methods;
	int kmax = 32;   // distribution mode: highest k reported
	int chain = 120; // lanczos mode: number of chain sites
	int threads = 0; // 0: hardware concurrency

	void validate() const;
	LiouvillianSpec spec() const { return {alpha, beta}; }
	std::vector<double> grid() const;
	std::vector<Method> effective_methods() const;
	nlohmann::ordered_json to_json() const;
};

// Bad configuration; maps to exit code 1.
class ConfigError : public std::runtime_error {
public:
	using std::runtime_error::runtime_error;
};

// A library failure at a specific grid point; maps to exit code 2.
class PointError : public std::runtime_error {
public:
	PointError(const std::string& what, double t) : std::runtime_error(what), t_(t) {}
	double time() const noexcept { return t_; }

private:
	double t_;
};

struct ResultRow {
	double t = 0.0;
	Method method = Method::closed_form;
	std::vector<std::pair<std::string, double>> values; // fixed column order
};

// One row per grid point and method, ordered by t then by method.
std::vector<ResultRow> run_sweep(const SweepConfig& cfg);

void write_csv(std::ostream& os, const std::vector<ResultRow>& rows);
nlohmann::ordered_json rows_to_json(const SweepConfig& cfg, const std::vector<ResultRow>& rows);

struct Check {
	std::string section;
	std::string name;
	double value = 0.0;
	double tolerance = 0.0;
	bool passed = false;
};

// Printed closed forms that disagree with the authoritative computation.
// Reported, never asserted.
struct Discrepancy {
	std::string name;
	std::string where;
	double printed = 0.0;
	double authoritative = 0.0;
	double deviation = 0.0;
};

struct VerifyReport {
	std::vector<Check> checks;
	std::vector<Discrepancy> discrepancies;

	bool passed() const;
};

VerifyReport verify(const SweepConfig& cfg);

void write_report(std::ostream& os, const SweepConfig& cfg, const VerifyReport& report);

enum class Figure { fig1, fig2, fig3 };
Figure parse_figure(const std::string& s);

// Writes <dir>/<figure>.csv and returns its path.
std::filesystem::path figure_data(Figure which, const std::filesystem::path& dir);

std::string format_number(double x);

} // namespace krylov::app

namespace krylov::app {

// Full command-line entry point. Returns the process exit code:
// 0 success, 1 invalid configuration, 2 numerical failure,
// 3 authoritative verification failure.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace krylov::app
