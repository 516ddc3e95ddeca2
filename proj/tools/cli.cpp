#include "krylov_app.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace krylov::app {

namespace {

// Writes to --out when given, otherwise to the supplied stream.
template <class F>
void emit(const std::string& path, std::ostream& fallback, F&& body) {
	if (path.empty()) {
		body(fallback);
		return;
	}
	std::ofstream os(path);
	if (!os)
		throw ConfigError("cannot write " + path);
	body(os);
}

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
	SweepConfig cfg;
	std::string mode = "complexity";
	std::string format = "csv";
	std::vector<std::string> methods;
	std::string figure;

	CLI::App app{"Krylov complexity sweeps for the Schrodinger group Liouvillian", "krylov"};
	app.set_config("--config", "", "key = value configuration file; flags override it");
	app.add_option("--alpha", cfg.alpha, "coefficient of a^dag + a")->capture_default_str();
	app.add_option("--beta", cfg.beta, "coefficient of (a^dag^2 + a^2)/2")->capture_default_str();
	app.add_option("--tmin", cfg.t_min, "first time")->capture_default_str();
	app.add_option("--tmax", cfg.t_max, "last time")->capture_default_str();
	app.add_option("--steps", cfg.steps, "number of grid points")->capture_default_str();
	app.add_option("--dim", cfg.dim, "Fock-space truncation")->capture_default_str();
	app.add_option("--tol", cfg.tol, "series and guard-band tolerance")->capture_default_str();
	app.add_option("--mode", mode, "complexity|variance|distribution|autocorrelator|lanczos|verify")
	    ->capture_default_str();
	app.add_option("--format", format, "csv|json")->capture_default_str();
	app.add_option("--out", cfg.out, "output file (directory with --figure)");
	app.add_option("--methods", methods, "closed_form,oracle,lanczos_chain")->delimiter(',');
	app.add_option("--kmax", cfg.kmax, "highest site in distribution mode")->capture_default_str();
	app.add_option("--chain", cfg.chain, "Lanczos chain length")->capture_default_str();
	app.add_option("--threads", cfg.threads, "worker threads, 0 = all cores")->capture_default_str();
	app.add_option("--figure", figure, "write fig1|fig2|fig3 data instead of a sweep");

	try {
		app.parse(argc, argv);
	} catch (const CLI::CallForHelp&) {
		out << app.help();
		return 0;
	} catch (const CLI::ParseError& e) {
		err << "krylov: " << e.what() << '\n';
		return 1;
	}

	try {
		cfg.mode = parse_mode(mode);
		if (format == "csv")
			cfg.format = Format::csv;
		else if (format == "json")
			cfg.format = Format::json;
		else
			throw ConfigError("unknown format '" + format + "'");
		for (const auto& m : methods)
			cfg.methods.push_back(parse_method(m));
		cfg.validate();

		if (!figure.empty()) {
			const auto path = figure_data(parse_figure(figure), cfg.out.empty() ? "." : cfg.out);
			out << path.string() << '\n';
			return 0;
		}

		if (cfg.mode == Mode::verify) {
			const VerifyReport report = verify(cfg);
			emit(cfg.out, out, [&](std::ostream& os) { write_report(os, cfg, report); });
			return report.passed() ? 0 : 3;
		}

		const auto rows = run_sweep(cfg);
		emit(cfg.out, out, [&](std::ostream& os) {
			if (cfg.format == Format::json)
				os << rows_to_json(cfg, rows).dump(2) << '\n';
			else
				write_csv(os, rows);
		});
		return 0;
	} catch (const ConfigError& e) {
		err << "krylov: invalid configuration: " << e.what() << '\n';
		return 1;
	} catch (const InvalidArgument& e) {
		err << "krylov: invalid configuration: " << e.what() << '\n';
		return 1;
	} catch (const PointError& e) {
		err << "krylov: numerical failure: " << e.what() << '\n';
		return 2;
	} catch (const Error& e) {
		err << "krylov: numerical failure: " << e.what() << " [alpha=" << format_number(cfg.alpha)
		    << ", beta=" << format_number(cfg.beta) << ", dim=" << cfg.dim << "]\n";
		return 2;
	}
}

} // namespace krylov::app
