#include "krylov_app.hpp"

#include <krylov/bch.hpp>
#include <krylov/coherent.hpp>
#include <krylov/lanczos.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

namespace krylov::app {

namespace {

const std::map<std::string, Mode> kModes = {
    {"complexity", Mode::complexity},         {"variance", Mode::variance},
    {"distribution", Mode::distribution},     {"autocorrelator", Mode::autocorrelator},
    {"lanczos", Mode::lanczos},               {"verify", Mode::verify},
};

const std::map<std::string, Method> kMethods = {
    {"closed_form", Method::closed_form},
    {"oracle", Method::oracle},
    {"lanczos_chain", Method::lanczos_chain},
};

template <class E>
std::string name_of(const std::map<std::string, E>& table, E value) {
	for (const auto& [k, v] : table)
		if (v == value)
			return k;
	return "?";
}

std::string describe(const SweepConfig& cfg, double t) {
	std::ostringstream os;
	os << " [alpha=" << format_number(cfg.alpha) << ", beta=" << format_number(cfg.beta)
	   << ", t=" << format_number(t) << ", dim=" << cfg.dim << "]";
	return os.str();
}

double fock_mean(const Eigen::VectorXcd& x) {
	double k = 0.0;
	for (Eigen::Index i = 0; i < x.size(); ++i)
		k += static_cast<double>(i) * std::norm(x(i));
	return k;
}

double fock_variance(const Eigen::VectorXcd& x, double mean) {
	double s = 0.0;
	for (Eigen::Index i = 0; i < x.size(); ++i) {
		const double d = static_cast<double>(i) - mean;
		s += d * d * std::norm(x(i));
	}
	return s;
}

using Values = std::vector<std::pair<std::string, double>>;

void push_distribution(Values& out, const Eigen::VectorXcd& x, int kmax) {
	for (int k = 0; k <= kmax; ++k) {
		const double p = k < x.size() ? std::norm(x(k)) : 0.0;
		out.emplace_back("p" + std::to_string(k), p);
	}
}

// Per-sweep shared state: the dense oracle and the Lanczos chain evolution.
struct Context {
	const SweepConfig& cfg;
	std::vector<double> grid;
	std::unique_ptr<LiouvillianOracle> oracle;
	std::vector<ChainWavefunction> chain_states;

	explicit Context(const SweepConfig& c) : cfg(c), grid(c.grid()) {
		const auto methods = c.effective_methods();
		const TruncationConfig trunc{static_cast<std::size_t>(c.dim), c.tol};
		if (std::count(methods.begin(), methods.end(), Method::oracle))
			oracle = std::make_unique<LiouvillianOracle>(c.spec(), trunc, trunc.dim);
		if (std::count(methods.begin(), methods.end(), Method::lanczos_chain))
			build_chain(trunc);
	}

	void build_chain(const TruncationConfig& trunc) {
		const OperatorMatrix L = build_liouvillian(cfg.spec(), trunc);
		const std::size_t m = std::min<std::size_t>(static_cast<std::size_t>(cfg.chain), trunc.dim);
		LanczosOptions opts;
		opts.keep_basis = false;
		const KrylovChain chain = lanczos_tridiagonalize(L, FockVector::basis(trunc.dim, 0), m, opts);
		try {
			chain_states = propagate_chain(chain, grid);
		} catch (const EdgeLeak& e) {
			throw PointError(std::string(e.what()) + describe(cfg, e.time()), e.time());
		}
	}
};

Values closed_form_values(const Context& ctx, double t) {
	const SweepConfig& cfg = ctx.cfg;
	const LiouvillianSpec spec = cfg.spec();
	Values out;
	switch (cfg.mode) {
	case Mode::complexity:
	case Mode::lanczos: {
		const DisplacementParams p = closed_form_params(spec, t);
		out.emplace_back("K", schrodinger_complexity_t(spec, t));
		if (cfg.mode == Mode::complexity) {
			out.emplace_back("K_params", complexity_closed(p));
			out.emplace_back("interaction", interaction_term(spec, t));
		}
		break;
	}
	case Mode::variance: {
		const DisplacementParams p = closed_form_params(spec, t);
		const VarianceReport v = variance_closed(p, SeriesOptions{cfg.tol});
		out.emplace_back("K", complexity_closed(p));
		out.emplace_back("sigma2", v.direct);
		out.emplace_back("sigma2_printed", v.printed);
		out.emplace_back("sigma2_deviation", v.deviation);
		break;
	}
	case Mode::distribution: {
		const AmplitudeSeries s = phi_series(closed_form_params(spec, t), SeriesOptions{cfg.tol});
		Eigen::VectorXcd x = Eigen::Map<const Eigen::VectorXcd>(s.phi.data(), static_cast<Eigen::Index>(s.phi.size()));
		push_distribution(out, x, cfg.kmax);
		break;
	}
	case Mode::autocorrelator: {
		const double a = autocorrelator_t(spec, t);
		const double printed = autocorrelator_printed(spec, t);
		out.emplace_back("A", a);
		out.emplace_back("A_printed", printed);
		out.emplace_back("A_deviation", printed - a);
		break;
	}
	case Mode::verify:
		break;
	}
	return out;
}

Values oracle_values(const Context& ctx, double t) {
	const auto [state, dim] = ctx.oracle->vacuum_state(t);
	const Eigen::VectorXcd& x = state.amplitudes();
	Values out;
	switch (ctx.cfg.mode) {
	case Mode::complexity:
	case Mode::lanczos:
		out.emplace_back("K", fock_mean(x));
		if (ctx.cfg.mode == Mode::complexity)
			out.emplace_back("guard_mass", state.guard_mass(TruncationConfig{dim, ctx.cfg.tol}));
		break;
	case Mode::variance: {
		const double k = fock_mean(x);
		out.emplace_back("K", k);
		out.emplace_back("sigma2", fock_variance(x, k));
		break;
	}
	case Mode::distribution:
		push_distribution(out, x, ctx.cfg.kmax);
		break;
	case Mode::autocorrelator:
		out.emplace_back("A", std::norm(x(0)));
		break;
	case Mode::verify:
		break;
	}
	return out;
}

Values chain_values(const Context& ctx, std::size_t index) {
	const Eigen::VectorXcd& phi = ctx.chain_states.at(index).phi;
	Values out;
	const double k = fock_mean(phi);
	switch (ctx.cfg.mode) {
	case Mode::complexity:
		out.emplace_back("K", k);
		out.emplace_back("norm", phi.squaredNorm());
		break;
	case Mode::lanczos:
		out.emplace_back("K", k);
		out.emplace_back("norm", phi.squaredNorm());
		out.emplace_back("edge_mass", std::norm(phi(phi.size() - 1)));
		break;
	case Mode::variance:
		out.emplace_back("K", k);
		out.emplace_back("sigma2", fock_variance(phi, k));
		break;
	case Mode::distribution:
		push_distribution(out, phi, ctx.cfg.kmax);
		break;
	case Mode::autocorrelator:
		out.emplace_back("A", std::norm(phi(0)));
		break;
	case Mode::verify:
		break;
	}
	return out;
}

std::vector<ResultRow> evaluate_point(const Context& ctx, std::size_t index) {
	const double t = ctx.grid[index];
	std::vector<ResultRow> rows;
	try {
		for (Method m : ctx.cfg.effective_methods()) {
			ResultRow row{t, m, {}};
			switch (m) {
			case Method::closed_form:
				row.values = closed_form_values(ctx, t);
				break;
			case Method::oracle:
				row.values = oracle_values(ctx, t);
				break;
			case Method::lanczos_chain:
				row.values = chain_values(ctx, index);
				break;
			}
			for (const auto& [name, value] : row.values)
				if (!std::isfinite(value))
					throw Error("non-finite value for " + to_string(m) + "." + name);
			rows.push_back(std::move(row));
		}
	} catch (const InvalidArgument& e) {
		throw ConfigError(std::string(e.what()) + describe(ctx.cfg, t));
	} catch (const Error& e) {
		throw PointError(std::string(e.what()) + describe(ctx.cfg, t), t);
	}
	return rows;
}

} // namespace

std::string to_string(Mode m) { return name_of(kModes, m); }
std::string to_string(Method m) { return name_of(kMethods, m); }

Mode parse_mode(const std::string& s) {
	const auto it = kModes.find(s);
	if (it == kModes.end())
		throw ConfigError("unknown mode '" + s + "'");
	return it->second;
}

Method parse_method(const std::string& s) {
	const auto it = kMethods.find(s);
	if (it == kMethods.end())
		throw ConfigError("unknown method '" + s + "'");
	return it->second;
}

void SweepConfig::validate() const {
	if (!std::isfinite(alpha) || !std::isfinite(beta))
		throw ConfigError("alpha and beta must be finite");
	if (!std::isfinite(t_min) || !std::isfinite(t_max) || t_min > t_max)
		throw ConfigError("need finite tmin <= tmax");
	if (steps < 1)
		throw ConfigError("steps must be >= 1");
	if (dim < 8)
		throw ConfigError("dim must be >= 8");
	if (!(tol > 0.0))
		throw ConfigError("tol must be positive");
	if (kmax < 0)
		throw ConfigError("kmax must be >= 0");
	if (chain < 1)
		throw ConfigError("chain must be >= 1");
	if (threads < 0)
		throw ConfigError("threads must be >= 0");
}

std::vector<double> SweepConfig::grid() const {
	std::vector<double> g(static_cast<std::size_t>(steps));
	for (int i = 0; i < steps; ++i)
		g[static_cast<std::size_t>(i)] =
		    steps == 1 ? t_min : t_min + (t_max - t_min) * static_cast<double>(i) / (steps - 1);
	return g;
}

std::vector<Method> SweepConfig::effective_methods() const {
	if (!methods.empty()) {
		std::vector<Method> m = methods;
		std::sort(m.begin(), m.end());
		m.erase(std::unique(m.begin(), m.end()), m.end());
		return m;
	}
	if (mode == Mode::lanczos)
		return {Method::lanczos_chain};
	return {Method::closed_form};
}

nlohmann::ordered_json SweepConfig::to_json() const {
	nlohmann::ordered_json methods_json = nlohmann::ordered_json::array();
	for (Method m : effective_methods())
		methods_json.push_back(to_string(m));
	return {{"alpha", alpha}, {"beta", beta}, {"tmin", t_min},   {"tmax", t_max},
	        {"steps", steps}, {"dim", dim},   {"tol", tol},      {"mode", to_string(mode)},
	        {"kmax", kmax},   {"chain", chain}, {"methods", methods_json}};
}

std::vector<ResultRow> run_sweep(const SweepConfig& cfg) {
	cfg.validate();
	if (cfg.mode == Mode::verify)
		throw ConfigError("verify mode produces a report, not sweep rows");

	std::optional<Context> built;
	try {
		built.emplace(cfg);
	} catch (const InvalidArgument& e) {
		throw ConfigError(std::string(e.what()) + describe(cfg, cfg.t_min));
	} catch (const Error& e) {
		throw PointError(std::string(e.what()) + describe(cfg, cfg.t_min), cfg.t_min);
	}
	const Context& ctx = *built;
	const std::size_t n = ctx.grid.size();
	std::vector<std::vector<ResultRow>> per_point(n);

	unsigned workers = cfg.threads > 0 ? static_cast<unsigned>(cfg.threads) : std::thread::hardware_concurrency();
	workers = std::clamp<unsigned>(workers, 1, static_cast<unsigned>(n));

	std::atomic<std::size_t> next{0};
	std::mutex err_mutex;
	std::exception_ptr first_error;
	std::size_t first_error_index = n;

	auto work = [&] {
		for (std::size_t i = next++; i < n; i = next++) {
			try {
				per_point[i] = evaluate_point(ctx, i);
			} catch (...) {
				// report the earliest failing grid point regardless of scheduling
				std::lock_guard lock(err_mutex);
				if (i < first_error_index) {
					first_error_index = i;
					first_error = std::current_exception();
				}
			}
		}
	};

	if (workers == 1) {
		work();
	} else {
		std::vector<std::thread> pool;
		for (unsigned w = 0; w < workers; ++w)
			pool.emplace_back(work);
		for (auto& th : pool)
			th.join();
	}
	if (first_error)
		std::rethrow_exception(first_error);

	std::vector<ResultRow> rows;
	for (auto& pr : per_point)
		for (auto& r : pr)
			rows.push_back(std::move(r));
	return rows;
}

std::string format_number(double x) {
	char buf[32];
	std::snprintf(buf, sizeof buf, "%.12g", x);
	return buf;
}

void write_csv(std::ostream& os, const std::vector<ResultRow>& rows) {
	if (rows.empty()) {
		os << "t\n";
		return;
	}
	// Rows of one grid point share a line; methods appear in a fixed order.
	std::vector<std::vector<const ResultRow*>> lines;
	for (const ResultRow& r : rows) {
		if (lines.empty() || r.method <= lines.back().back()->method)
			lines.emplace_back();
		lines.back().push_back(&r);
	}
	os << "t";
	for (const ResultRow* r : lines.front())
		for (const auto& [name, value] : r->values)
			os << ',' << to_string(r->method) << '.' << name;
	os << '\n';
	for (const auto& line : lines) {
		os << format_number(line.front()->t);
		for (const ResultRow* r : line)
			for (const auto& [name, value] : r->values)
				os << ',' << format_number(value);
		os << '\n';
	}
}

nlohmann::ordered_json rows_to_json(const SweepConfig& cfg, const std::vector<ResultRow>& rows) {
	nlohmann::ordered_json out;
	out["config"] = cfg.to_json();
	nlohmann::ordered_json arr = nlohmann::ordered_json::array();
	for (const ResultRow& r : rows) {
		nlohmann::ordered_json values = nlohmann::ordered_json::object();
		for (const auto& [name, value] : r.values)
			values[name] = value;
		arr.push_back({{"t", r.t}, {"values", values}, {"method", to_string(r.method)}});
	}
	out["rows"] = std::move(arr);
	return out;
}

} // namespace krylov::app
