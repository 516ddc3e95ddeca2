#include "krylov_app.hpp"

#include <krylov/bch.hpp>
#include <krylov/coherent.hpp>

#include <fstream>

namespace krylov::app {

namespace {

std::vector<double> linspace(double a, double b, int n) {
	std::vector<double> g(static_cast<std::size_t>(n));
	for (int i = 0; i < n; ++i)
		g[static_cast<std::size_t>(i)] = a + (b - a) * i / (n - 1);
	return g;
}

double prob_at(const std::vector<cplx>& phi, std::size_t k) { return k < phi.size() ? std::norm(phi[k]) : 0.0; }

// alpha = 0, beta = 1, t = 1: Fock-site probabilities against the SL2R h = 1/4
// chain, both as-is and at the doubled index.
void write_fig1(std::ostream& os) {
	const AmplitudeSeries s = phi_series(closed_form_params({0.0, 1.0}, 1.0), SeriesOptions{1e-14});
	const ChainProfile sl = sl2r_profile(SL2RWeight{0.25}, 1.0, 1.0);
	os << "k,schrodinger_p,sl2r_p_at_half_k,sl2r_p\n";
	for (std::size_t k = 0; k <= 40; ++k) {
		const double half = k % 2 == 0 ? prob_at(sl.phi, k / 2) : 0.0;
		os << k << ',' << format_number(prob_at(s.phi, k)) << ',' << format_number(half) << ','
		   << format_number(prob_at(sl.phi, k)) << '\n';
	}
}

void write_fig2(std::ostream& os) {
	const LiouvillianSpec red{0.01, 1.0};
	const LiouvillianSpec black{1.0, 0.01};
	os << "t,K_alpha0.01_beta1,K_alpha1_beta0.01\n";
	for (double t : linspace(0.0, 5.0, 101))
		os << format_number(t) << ',' << format_number(schrodinger_complexity_t(red, t)) << ','
		   << format_number(schrodinger_complexity_t(black, t)) << '\n';
}

void write_fig3(std::ostream& os) {
	const LiouvillianSpec hw{1.0, 0.0};
	const LiouvillianSpec sl{0.0, 1.0};
	const LiouvillianSpec both{1.0, 1.0};
	os << "t,A_alpha1_beta0,A_alpha0_beta1,A_alpha1_beta1\n";
	for (double t : linspace(0.0, 3.0, 61))
		os << format_number(t) << ',' << format_number(autocorrelator_t(hw, t)) << ','
		   << format_number(autocorrelator_t(sl, t)) << ',' << format_number(autocorrelator_t(both, t)) << '\n';
}

} // namespace

Figure parse_figure(const std::string& s) {
	if (s == "fig1")
		return Figure::fig1;
	if (s == "fig2")
		return Figure::fig2;
	if (s == "fig3")
		return Figure::fig3;
	throw ConfigError("unknown figure '" + s + "' (expected fig1, fig2 or fig3)");
}

std::filesystem::path figure_data(Figure which, const std::filesystem::path& dir) {
	std::filesystem::create_directories(dir);
	const char* name = which == Figure::fig1 ? "fig1.csv" : which == Figure::fig2 ? "fig2.csv" : "fig3.csv";
	const std::filesystem::path path = dir / name;
	std::ofstream os(path);
	if (!os)
		throw ConfigError("cannot write " + path.string());
	switch (which) {
	case Figure::fig1:
		write_fig1(os);
		break;
	case Figure::fig2:
		write_fig2(os);
		break;
	case Figure::fig3:
		write_fig3(os);
		break;
	}
	return path;
}

} // namespace krylov::app
