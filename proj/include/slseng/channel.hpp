#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>

#include "slseng/geometry.hpp"
#include "slseng/rng.hpp"

namespace slseng {

enum class LinkState { LOS, NLOS };

enum class BeamKind { Omni, Sectorized, Ideal };

struct GainLevel {
    double prob;
    double gain;
};

// Two-level antenna gain: main lobe a over beamwidth phi, side lobe b
// elsewhere, normalized so a*q + b*(1-q) = 1 with q = phi/(2 pi).
// Ideal drops the side lobe (b = 0, normalization waived).
struct BeamPattern {
    BeamKind kind = BeamKind::Omni;
    double a = 1.0;
    double b = 1.0;
    double phi = kTwoPi;

    static BeamPattern omni() { return {}; }

    static BeamPattern sectorized(double a, double b, double phi) {
        if (!(a > 0.0) || !(b >= 0.0) || !(phi > 0.0) || !(phi <= kTwoPi))
            throw std::domain_error("BeamPattern: need a>0, b>=0, 0<phi<=2pi");
        return {BeamKind::Sectorized, a, b, phi};
    }

    static BeamPattern ideal(double a, double phi) {
        if (!(a > 0.0) || !(phi > 0.0) || !(phi <= kTwoPi))
            throw std::domain_error("BeamPattern: need a>0, 0<phi<=2pi");
        return {BeamKind::Ideal, a, 0.0, phi};
    }

    // ULA approximation: a = M, phi = kappa/M, b = (1-k')/(1-k'/M) with
    // k' = kappa/(2 pi). M = 1 degenerates to omni.
    static BeamPattern ula(std::size_t m, double kappa, BeamKind kind = BeamKind::Sectorized) {
        if (m < 1) throw std::domain_error("BeamPattern: antenna count must be >= 1");
        if (!(kappa > 0.0) || !(kappa <= kTwoPi))
            throw std::domain_error("BeamPattern: kappa must be in (0, 2pi]");
        if (m == 1) return omni();
        const double md = static_cast<double>(m);
        const double kp = kappa / kTwoPi;
        if (kind == BeamKind::Ideal) return ideal(md, kappa / md);
        return sectorized(md, (1.0 - kp) / (1.0 - kp / md), kappa / md);
    }

    double q() const { return kind == BeamKind::Omni ? 1.0 : phi / kTwoPi; }

    // Gain at offset theta from boresight (normalized to [-pi, pi) first).
    double gain(double theta) const {
        if (kind == BeamKind::Omni) return 1.0;
        return std::fabs(wrap_angle(theta)) <= 0.5 * phi ? a : b;
    }

    // Distribution of the gain at a uniformly random offset.
    std::array<GainLevel, 2> levels() const {
        if (kind == BeamKind::Omni) return {{{1.0, 1.0}, {0.0, 1.0}}};
        return {{{q(), a}, {1.0 - q(), b}}};
    }
};

inline double gain(const BeamPattern& bp, double theta) { return bp.gain(theta); }

struct AntennaConfig {
    BeamPattern pt;  // primary transmit
    BeamPattern pr;  // primary receive
    BeamPattern st;  // secondary transmit
    BeamPattern sr;  // secondary receive

    static AntennaConfig omni() { return {}; }
    static AntennaConfig ula(std::size_t m_p, std::size_t m_s, double kappa,
                             BeamKind kind = BeamKind::Sectorized) {
        const BeamPattern p = BeamPattern::ula(m_p, kappa, kind);
        const BeamPattern s = BeamPattern::ula(m_s, kappa, kind);
        return {p, p, s, s};
    }
};

struct PathLossParams {
    double alpha_l = 2.4;
    double alpha_n = 4.2;
    double c_l = 1e-6;   // linear, -60 dB
    double c_n = 1e-7;   // linear, -70 dB
    bool nlos_outage = false;

    void validate() const {
        if (!(alpha_l > 2.0) || !(alpha_n >= alpha_l))
            throw std::domain_error("PathLossParams: need alpha_n >= alpha_l > 2");
        if (!(c_l >= c_n) || !(c_n >= 0.0))
            throw std::domain_error("PathLossParams: need c_l >= c_n >= 0");
    }

    double alpha(LinkState t) const { return t == LinkState::LOS ? alpha_l : alpha_n; }
    double near_field(LinkState t) const {
        if (t == LinkState::LOS) return c_l;
        return nlos_outage ? 0.0 : c_n;
    }
};

// Dual-slope blockage path loss C_T z^{-alpha_T}. Below 1 m the loss is
// capped at the near-field constant; this is a model extension, the closed
// forms integrate the pure power law.
inline double path_loss(double z, LinkState state, const PathLossParams& plp) {
    if (!(z > 0.0)) throw std::domain_error("path_loss: distance must be > 0");
    const double c = plp.near_field(state);
    if (c == 0.0) return 0.0;
    if (z < 1.0) return c;
    return c * std::pow(z, -plp.alpha(state));
}

struct SecondaryPlacement {
    double x_s;      // distance from the primary receiver
    double theta_s;  // bearing of the transmitter
    double omega_s;  // its receiver/boresight direction

    SecondaryPlacement(double x, double theta, double omega)
        : x_s(x), theta_s(wrap_angle(theta)), omega_s(wrap_angle(omega)) {
        if (!(x > 0.0)) throw std::domain_error("SecondaryPlacement: x_s must be > 0");
    }
};

// kappa_i0 = g_pr(theta_s) * g_st(theta_s - pi - omega_s), the cross-link
// directivity product seen at the primary receiver.
inline double cross_gain_at_primary(const SecondaryPlacement& sp, const AntennaConfig& ac) {
    return ac.pr.gain(sp.theta_s) * ac.st.gain(sp.theta_s - kPi - sp.omega_s);
}

// Received power at the primary receiver due to one secondary transmitter.
inline double received_power_at_primary(const SecondaryPlacement& sp, double g_fade,
                                        LinkState state, double p_s,
                                        const AntennaConfig& ac, const PathLossParams& plp) {
    if (!(g_fade >= 0.0)) throw std::domain_error("received_power_at_primary: negative fading");
    return p_s * cross_gain_at_primary(sp, ac) * g_fade * path_loss(sp.x_s, state, plp);
}

// Transmit restriction of the secondary license: transmit only while the
// instantaneous power at the primary receiver stays strictly below rho.
inline bool transmit_indicator(double power, double rho) {
    if (!(power >= 0.0) || !(rho >= 0.0))
        throw std::domain_error("transmit_indicator: negative argument");
    return power < rho;
}

// Rayleigh fading power coefficient, exp(1).
inline double sample_fading(Rng& rng) { return rng.exp1(); }

}  // namespace slseng
