#include "krylov/coherent.hpp"
#include "krylov/bch.hpp"
#include "krylov/special.hpp"

#include <cmath>
#include <limits>

namespace krylov {

namespace {

using lcplx = std::complex<long double>;

constexpr double kInf = std::numeric_limits<double>::infinity();

double log_cosh(double x) {
	const double a = std::abs(x);
	return a + std::log1p(std::exp(-2.0 * a)) - std::log(2.0);
}

// log |phi_0|^2 = -|v|^2 - log cosh r - Re(v^2 e) tanh r
double log_abs_phi0_sq(const DisplacementParams& p) {
	const double r = p.squeeze();
	const double vv = std::norm(p.v);
	if (r == 0.0)
		return -vv;
	return -vv - log_cosh(r) - std::real(p.v * p.v * p.squeeze_phase()) * std::tanh(r);
}

// Mass beyond the last index, extrapolated from the last two (even, odd) pairs.
// `floor_ratio` is the asymptotic pair ratio tanh^2|w|.
double extrapolated_tail(const std::vector<cplx>& phi, double floor_ratio) {
	const std::size_t n = phi.size();
	if (n < 4)
		return kInf;
	const double last = std::norm(phi[n - 1]) + std::norm(phi[n - 2]);
	const double prev = std::norm(phi[n - 3]) + std::norm(phi[n - 4]);
	if (last == 0.0)
		return 0.0;
	if (prev == 0.0)
		return kInf;
	const double q = std::max(floor_ratio, last / prev);
	if (q >= 1.0)
		return kInf;
	return last * q / (1.0 - q);
}

} // namespace

cplx phi_zero(const DisplacementParams& p) {
	const double r = p.squeeze();
	cplx ex = -0.5 * std::norm(p.v);
	if (r > 0.0)
		ex += -0.5 * log_cosh(r) - 0.5 * p.v * p.v * p.squeeze_phase() * std::tanh(r);
	return p.theta * std::exp(ex);
}

void SeriesOptions::validate() const {
	if (!(tol > 0.0))
		throw InvalidArgument("series tolerance must be positive");
	if (k_start < 4 || k_cap < k_start)
		throw InvalidArgument("series needs 4 <= k_start <= k_cap");
}

std::vector<double> AmplitudeSeries::probabilities() const {
	std::vector<double> out(phi.size());
	for (std::size_t k = 0; k < phi.size(); ++k)
		out[k] = std::norm(phi[k]);
	return out;
}

AmplitudeSeries phi_series(const DisplacementParams& p, const SeriesOptions& opts) {
	p.validate();
	opts.validate();

	const double tau = std::tanh(p.squeeze());
	const cplx B = p.squeeze_phase() * tau;
	const cplx A = std::conj(p.v) + p.v * B;

	AmplitudeSeries out;
	out.params = p;
	out.phi.reserve(opts.k_start + 1);
	out.phi.push_back(phi_zero(p));
	long double sum = std::norm(out.phi[0]);

	std::size_t target = opts.k_start;
	for (;;) {
		// sqrt(k+1) phi_{k+1} = -(A phi_k + sqrt(k) B phi_{k-1})
		for (std::size_t k = out.phi.size() - 1; k < target; ++k) {
			const cplx prev = k > 0 ? out.phi[k - 1] : cplx(0.0);
			const double sk = std::sqrt(static_cast<double>(k));
			const cplx next = -(A * out.phi[k] + sk * B * prev) / std::sqrt(static_cast<double>(k + 1));
			out.phi.push_back(next);
			sum += std::norm(next);
		}
		out.k_max = target;
		out.tail_bound = static_cast<double>(1.0L - sum);
		out.tail_estimate = extrapolated_tail(out.phi, tau * tau);
		if (out.tail_estimate <= opts.tol && std::abs(out.tail_bound) <= opts.tol)
			return out;
		if (target >= opts.k_cap)
			throw NonConvergent(opts.k_cap, std::max(std::abs(out.tail_bound), out.tail_estimate));
		target = std::min(2 * target, opts.k_cap);
	}
}

std::vector<cplx> phi_hermite(const DisplacementParams& p, std::size_t k_max) {
	p.validate();
	const cplx phi0 = phi_zero(p);
	std::vector<cplx> out(k_max + 1);
	out[0] = phi0;

	if (!p.s) {
		// coherent branch: phi_k = phi_0 (-conj v)^k / sqrt(k!)
		lcplx term(phi0.real(), phi0.imag());
		const lcplx m(-p.v.real(), p.v.imag());
		for (std::size_t k = 1; k <= k_max; ++k) {
			term *= m / std::sqrt(static_cast<long double>(k));
			out[k] = cplx(static_cast<double>(term.real()), static_cast<double>(term.imag()));
		}
		return out;
	}

	const cplx c = std::sqrt(0.5 * p.squeeze_phase() * std::tanh(p.squeeze()));
	const lcplx log_c = std::log(lcplx(c.real(), c.imag()));
	const lcplx s(p.s->real(), p.s->imag());
	const lcplx lphi0(phi0.real(), phi0.imag());

	// H_k = h_cur * exp(log_scale)
	lcplx h_prev = 1.0L;
	lcplx h_cur = 2.0L * s;
	long double log_scale = 0.0L;
	auto emit = [&](std::size_t k, lcplx h) {
		const long double kk = static_cast<long double>(k);
		const lcplx f = std::exp(kk * log_c - 0.5L * std::lgamma(kk + 1.0L) + log_scale);
		const lcplx v = lphi0 * f * h;
		out[k] = cplx(static_cast<double>(v.real()), static_cast<double>(v.imag()));
	};
	if (k_max >= 1)
		emit(1, h_cur);
	for (std::size_t k = 1; k < k_max; ++k) {
		const lcplx h_next = 2.0L * s * h_cur - 2.0L * static_cast<long double>(k) * h_prev;
		h_prev = h_cur;
		h_cur = h_next;
		const long double mag = std::abs(h_cur);
		if (mag > 1e200L) {
			h_prev /= mag;
			h_cur /= mag;
			log_scale += std::log(mag);
		}
		emit(k + 1, h_cur);
	}
	return out;
}

double mehler_normalization_check(const DisplacementParams& p) {
	p.validate();
	const double r = p.squeeze();
	if (!p.s)
		return std::exp(log_abs_phi0_sq(p) + std::norm(p.v));
	const cplx s = *p.s;
	const double sh = std::sinh(r);
	const double ch = std::cosh(r);
	// log of (1 - z^2)^{-1/2} exp[(2|s|^2 z - 2 Re(s^2) z^2) / (1 - z^2)] at z = tanh r
	const double log_mehler = log_cosh(r) + 2.0 * std::norm(s) * sh * ch - 2.0 * std::real(s * s) * sh * sh;
	return std::exp(log_abs_phi0_sq(p) + log_mehler);
}

double complexity_closed(const DisplacementParams& p) {
	const double sh = std::sinh(p.squeeze());
	return std::norm(p.v) + sh * sh;
}

MomentReport moments(const AmplitudeSeries& series, int max_order) {
	if (max_order < 0)
		throw InvalidArgument("moment order must be nonnegative");
	const int top = std::max(max_order, 2);
	std::vector<long double> acc(static_cast<std::size_t>(top) + 1, 0.0L);
	for (std::size_t k = 0; k < series.phi.size(); ++k) {
		const long double pk = std::norm(series.phi[k]);
		long double kn = 1.0L;
		for (int n = 0; n <= top; ++n) {
			acc[static_cast<std::size_t>(n)] += kn * pk;
			kn *= static_cast<long double>(k);
		}
	}
	MomentReport out;
	for (int n = 0; n <= max_order; ++n)
		out.moments[n] = static_cast<double>(acc[static_cast<std::size_t>(n)]);
	out.K = static_cast<double>(acc[1]);
	long double centred = 0.0L;
	for (std::size_t k = 0; k < series.phi.size(); ++k) {
		const long double d = static_cast<long double>(k) - acc[1];
		centred += d * d * std::norm(series.phi[k]);
	}
	out.sigma2 = static_cast<double>(centred);
	return out;
}

MomentReport moments(const DisplacementParams& p, int max_order, const SeriesOptions& opts) {
	return moments(phi_series(p, opts), max_order);
}

double moment_n(const DisplacementParams& p, int n, const SeriesOptions& opts) {
	if (n < 0)
		throw InvalidArgument("moment order must be nonnegative");
	return moments(p, n, opts).moments.at(n);
}

namespace {

struct MehlerExponent {
	double r;
	double s2;     // |s|^2
	double re_ss;  // Re(s^2)

	// Lambda(r + h) - Lambda(r), Lambda = log cosh r + 2|s|^2 sinh r cosh r - 2 Re(s^2) sinh^2 r
	double delta(double h) const {
		const double sh = std::sinh(0.5 * h);
		return std::log1p(2.0 * sh * sh + std::tanh(r) * std::sinh(h)) +
		       2.0 * s2 * std::cosh(2.0 * r + h) * std::sinh(h) -
		       2.0 * re_ss * std::sinh(2.0 * r + h) * std::sinh(h);
	}
};

double poisson_moment(double vv, int n) {
	switch (n) {
	case 0:
		return 1.0;
	case 1:
		return vv;
	default:
		return vv + vv * vv;
	}
}

void check_identity_order(int n) {
	if (n < 0 || n > 2)
		throw InvalidArgument("moment identity implemented for n in {0, 1, 2}");
}

} // namespace

double moment_identity(const DisplacementParams& p, int n) {
	check_identity_order(n);
	p.validate();
	if (n == 0)
		return 1.0;
	if (!p.s)
		return poisson_moment(std::norm(p.v), n);

	const double r = p.squeeze();
	const double s2 = std::norm(*p.s);
	const double re_ss = std::real(*p.s * *p.s);
	const double sh2 = std::sinh(2.0 * r);
	const double ch2 = std::cosh(2.0 * r);
	const double sech = 1.0 / std::cosh(r);

	const double d1 = std::tanh(r) + 2.0 * s2 * ch2 - 2.0 * re_ss * sh2;
	const double sc = 0.5 * sh2;
	const double k1 = sc * d1;
	if (n == 1)
		return k1;
	const double d2 = sech * sech + 4.0 * s2 * sh2 - 4.0 * re_ss * ch2;
	return sc * (ch2 * d1 + sc * d2) + k1 * k1;
}

double moment_identity_fd(const DisplacementParams& p, int n, double step) {
	check_identity_order(n);
	p.validate();
	if (!(step > 0.0))
		throw InvalidArgument("finite-difference step must be positive");
	if (n == 0)
		return 1.0;
	if (!p.s)
		return poisson_moment(std::norm(p.v), n);

	const double r = p.squeeze();
	const MehlerExponent lam{r, std::norm(*p.s), std::real(*p.s * *p.s)};
	const double fwd = lam.delta(step);
	const double bwd = lam.delta(-step);
	const double d1 = (fwd - bwd) / (2.0 * step);
	const double d2 = (fwd + bwd) / (step * step);

	const double sc = 0.5 * std::sinh(2.0 * r);
	const double k1 = sc * d1;
	if (n == 1)
		return k1;
	return sc * (std::cosh(2.0 * r) * d1 + sc * d2) + k1 * k1;
}

VarianceReport variance_closed(const DisplacementParams& p, const SeriesOptions& opts) {
	VarianceReport out;
	out.direct = moments(p, 2, opts).sigma2;

	const double r = p.squeeze();
	const double sh = std::sinh(r);
	const double ch = std::cosh(r);
	double bracket = std::sinh(2.0 * r);
	if (r > 0.0) {
		const cplx vb = std::conj(p.v);
		bracket -= std::real(vb * vb * p.w + p.v * p.v * std::conj(p.w)) / r;
	}
	out.printed = std::abs(p.v) * std::cosh(2.0 * r) + sh * ch * bracket;
	out.deviation = out.printed - out.direct;
	return out;
}

ChainProfile hw_profile(double alpha, double t, double tol) {
	if (!std::isfinite(alpha) || !std::isfinite(t))
		throw InvalidArgument("hw_profile needs finite alpha and t");
	if (!(tol > 0.0))
		throw InvalidArgument("tolerance must be positive");
	const double x = alpha * t;
	const double xx = x * x;
	ChainProfile out;
	out.K = xx;
	if (x == 0.0) {
		out.phi = {cplx(1.0)};
		return out;
	}
	const double log_x = std::log(std::abs(x));
	const cplx unit = x > 0.0 ? cplx(0.0, 1.0) : cplx(0.0, -1.0);
	constexpr std::size_t cap = std::size_t{1} << 20;
	long double sum = 0.0L;
	long double ksum = 0.0L;
	cplx phase(1.0);
	for (std::size_t n = 0;; ++n) {
		const double dn = static_cast<double>(n);
		const double prob = std::exp(-xx + 2.0 * dn * log_x - std::lgamma(dn + 1.0));
		out.phi.push_back(phase * std::sqrt(prob));
		sum += prob;
		ksum += dn * prob;
		phase *= unit;
		const double q = xx / (dn + 2.0);
		if (q <= 0.5 && prob * q / (1.0 - q) <= tol)
			break;
		if (n + 1 >= cap)
			throw NonConvergent(cap, prob);
	}
	out.K_sum = static_cast<double>(ksum);
	out.tail_bound = static_cast<double>(1.0L - sum);
	return out;
}

void SL2RWeight::validate() const {
	if (!(h > 0.0) || !std::isfinite(h))
		throw InvalidArgument("lowest weight h must be positive");
}

ChainProfile sl2r_profile(SL2RWeight h, double beta, double t, double tol) {
	h.validate();
	if (!std::isfinite(beta) || !std::isfinite(t))
		throw InvalidArgument("sl2r_profile needs finite beta and t");
	if (!(tol > 0.0))
		throw InvalidArgument("tolerance must be positive");
	const double x = beta * t;
	const double sh = std::sinh(x);
	ChainProfile out;
	out.K = 2.0 * h.h * sh * sh;
	const double tau = std::tanh(x);
	if (tau == 0.0) {
		out.phi = {cplx(1.0)};
		return out;
	}
	const double two_h = 2.0 * h.h;
	const double log_tau = std::log(std::abs(tau));
	const double log_norm = -std::lgamma(two_h) - 2.0 * two_h * log_cosh(x);
	const double sign = tau > 0.0 ? 1.0 : -1.0;
	const double tau2 = tau * tau;
	constexpr std::size_t cap = std::size_t{1} << 22;
	long double sum = 0.0L;
	long double ksum = 0.0L;
	double phase = 1.0;
	for (std::size_t n = 0;; ++n) {
		const double dn = static_cast<double>(n);
		const double prob =
		    std::exp(log_norm + std::lgamma(two_h + dn) - std::lgamma(dn + 1.0) + 2.0 * dn * log_tau);
		out.phi.push_back(phase * std::sqrt(prob));
		sum += prob;
		ksum += dn * prob;
		phase *= sign;
		// later ratios tau^2 (2h + m)/(m + 1) are bounded by max(current, tau^2)
		const double q = std::max(tau2 * (two_h + dn) / (dn + 1.0), tau2);
		if (n > 0 && q < 1.0 && prob * q / (1.0 - q) <= tol)
			break;
		if (n + 1 >= cap)
			throw NonConvergent(cap, prob);
	}
	out.K_sum = static_cast<double>(ksum);
	out.tail_bound = static_cast<double>(1.0L - sum);
	return out;
}

double interaction_term(const LiouvillianSpec& spec, double t) {
	spec.validate();
	const double at = spec.alpha * t;
	return at * at * special::interaction_shape(spec.beta * t);
}

double schrodinger_complexity_t(const LiouvillianSpec& spec, double t) {
	spec.validate();
	if (!std::isfinite(t))
		throw InvalidArgument("time must be finite");
	const double at = spec.alpha * t;
	if (spec.beta == 0.0)
		return at * at;
	const double sh = std::sinh(spec.beta * t);
	return at * at + sh * sh + interaction_term(spec, t);
}

double scrambling_time(const LiouvillianSpec& spec) {
	spec.validate();
	if (!(spec.beta > 0.0))
		throw InvalidArgument("scrambling time needs beta > 0");
	const double b2 = spec.beta * spec.beta;
	return std::log(4.0 * b2 / (b2 + 2.0 * spec.alpha * spec.alpha)) / spec.beta;
}

double autocorrelator_t(const LiouvillianSpec& spec, double t) {
	return std::norm(phi_zero(closed_form_params(spec, t)));
}

double autocorrelator_printed(const LiouvillianSpec& spec, double t) {
	spec.validate();
	if (spec.beta == 0.0)
		return std::exp(-0.5 * spec.alpha * spec.alpha * t * t);
	const double x = spec.beta * t;
	const double em = std::expm1(2.0 * x);
	const double ratio = spec.alpha / spec.beta;
	return std::exp(-0.125 * ratio * ratio * em * em + 2.0 * x - log_cosh(2.0 * x));
}

double late_time_exponent(const LiouvillianSpec& spec, double t0, double t1, std::size_t samples) {
	if (!(t1 > t0) || samples < 2)
		throw InvalidArgument("late-time fit needs t1 > t0 and at least two samples");
	double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
	for (std::size_t i = 0; i < samples; ++i) {
		const double t = t0 + (t1 - t0) * static_cast<double>(i) / static_cast<double>(samples - 1);
		const double k = schrodinger_complexity_t(spec, t);
		if (!(k > 0.0))
			throw InvalidArgument("complexity vanishes; no growth exponent");
		const double y = std::log(k);
		sx += t;
		sy += y;
		sxx += t * t;
		sxy += t * y;
	}
	const double n = static_cast<double>(samples);
	return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

} // namespace krylov
