#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "dit/constants.hpp"

namespace dit {

struct QuadratureSettings {
    double rel_tol = 1e-8;
    double abs_tol = 1e-12;
    int max_subdivisions = 2000;
};

class QuadratureError : public std::runtime_error {
public:
    QuadratureError(const std::string& msg, double estimate)
        : std::runtime_error(msg), estimate_(estimate) {}
    double error_estimate() const noexcept { return estimate_; }

private:
    double estimate_;
};

struct QuadratureResult {
    Complex value{};
    double error = 0.0;
    int panels = 0;
    bool converged = false;
};

namespace detail {

// 61-point Kronrod / 30-point Gauss pair (QUADPACK dqk61 abscissae/weights,
// evaluated to 80 decimal digits by L. W. Fullerton).
inline constexpr double gk61_xgk[31] = {
    0.999484410050490637571325895705811, 0.996893484074649540271630050918695,
    0.991630996870404594858628366109486, 0.983668123279747209970032581605663,
    0.973116322501126268374693868423707, 0.960021864968307512216871025581798,
    0.944374444748559979415831324037439, 0.926200047429274325879324277080474,
    0.905573307699907798546522558925958, 0.882560535792052681543116462530226,
    0.857205233546061098958658510658944, 0.829565762382768397442898119732502,
    0.799727835821839083013668942322683, 0.767777432104826194917977340974503,
    0.733790062453226804726171131369528, 0.697850494793315796932292388026640,
    0.660061064126626961370053668149271, 0.620526182989242861140477556431189,
    0.579345235826361691756024932172540, 0.536624148142019899264169793311073,
    0.492480467861778574993693061207709, 0.447033769538089176780609900322854,
    0.400401254830394392535476211542661, 0.352704725530878113471037207089374,
    0.304073202273625077372677107199257, 0.254636926167889846439805129817805,
    0.204525116682309891438957671002025, 0.153869913608583546963794672743256,
    0.102806937966737030147096751318001, 0.051471842555317695833025213166723,
    0.000000000000000000000000000000000};

inline constexpr double gk61_wgk[31] = {
    0.001389013698677007624551591226760, 0.003890461127099884051267201844516,
    0.006630703915931292173319826369750, 0.009273279659517763428441146892024,
    0.011823015253496341742232898853251, 0.014369729507045804812451432443580,
    0.016920889189053272627572289420322, 0.019414141193942381173408951050128,
    0.021828035821609192297167485738339, 0.024191162078080601365686370725232,
    0.026509954882333101610601709335075, 0.028754048765041292843978785354334,
    0.030907257562387762472884252943092, 0.032981447057483726031814191016854,
    0.034979338028060024137499670731468, 0.036882364651821229223911065617136,
    0.038678945624727592950348651532281, 0.040374538951535959111995279752468,
    0.041969810215164246147147541285970, 0.043452539701356069316831728117073,
    0.044814800133162663192355551616723, 0.046059238271006988116271735559374,
    0.047185546569299153945261478181099, 0.048185861757087129140779492298305,
    0.049055434555029778887528165367238, 0.049795683427074206357811569379942,
    0.050405921402782346840893085653585, 0.050881795898749606492297473049805,
    0.051221547849258772170656282604944, 0.051426128537459025933862879215781,
    0.051494729429451567558340433647099};

inline constexpr double gk61_wg[15] = {
    0.007968192496166605615465883474674, 0.018466468311090959142302131912047,
    0.028784707883323369349719179611292, 0.038799192569627049596801936446348,
    0.048402672830594052902938140422808, 0.057493156217619066481721689402056,
    0.065974229882180495128128515115962, 0.073755974737705206268243850022191,
    0.080755895229420215354694938460530, 0.086899787201082979802387530715126,
    0.092122522237786128717632707087619, 0.096368737174644259639468626351810,
    0.099593420586795267062780282103569, 0.101762389748405504596428952168554,
    0.102852652893558840341285636705415};

template <class F>
inline void gk61_panel(const F& f, double a, double b, Complex& value, double& abserr,
                       double& resabs_out) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const Complex fc = f(c);
    Complex resk = gk61_wgk[30] * fc;
    Complex resg{};
    double resabs = gk61_wgk[30] * std::abs(fc);
    Complex fv1[30], fv2[30];
    for (int j = 0; j < 30; ++j) {
        const double dx = h * gk61_xgk[j];
        fv1[j] = f(c - dx);
        fv2[j] = f(c + dx);
        const Complex fsum = fv1[j] + fv2[j];
        resk += gk61_wgk[j] * fsum;
        resabs += gk61_wgk[j] * (std::abs(fv1[j]) + std::abs(fv2[j]));
        if (j & 1) resg += gk61_wg[j / 2] * fsum;
    }
    const Complex reskh = resk * 0.5;
    double resasc = gk61_wgk[30] * std::abs(fc - reskh);
    for (int j = 0; j < 30; ++j)
        resasc += gk61_wgk[j] * (std::abs(fv1[j] - reskh) + std::abs(fv2[j] - reskh));
    const double ah = std::abs(h);
    value = resk * h;
    resabs *= ah;
    resasc *= ah;
    double err = std::abs(resk - resg) * ah;
    if (resasc != 0.0 && err != 0.0)
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    abserr = std::max(err, 50.0 * std::numeric_limits<double>::epsilon() * resabs);
    resabs_out = resabs;
}

}  // namespace detail

// Globally adaptive Gauss-Kronrod integration of a complex-valued integrand
// over [a, b]. `splits` seeds interior panel boundaries (knots, stationary
// points). Does not throw on non-convergence; inspect `converged`.
template <class F>
QuadratureResult integrate_adaptive(const F& f, double a, double b,
                                    const QuadratureSettings& qs = {},
                                    std::vector<double> splits = {}) {
    struct Panel {
        double a, b, err, resabs;
        Complex val;
        bool operator<(const Panel& o) const { return err < o.err; }
    };
    if (!(b > a)) {
        if (a == b) return {Complex{}, 0.0, 0, true};
        throw std::invalid_argument("integrate_adaptive: bad interval");
    }
    splits.erase(std::remove_if(splits.begin(), splits.end(),
                                [&](double s) { return !(s > a && s < b); }),
                 splits.end());
    splits.push_back(a);
    splits.push_back(b);
    std::sort(splits.begin(), splits.end());
    splits.erase(std::unique(splits.begin(), splits.end()), splits.end());

    std::vector<Panel> heap;
    heap.reserve(64);
    for (size_t i = 0; i + 1 < splits.size(); ++i) {
        Panel p{splits[i], splits[i + 1], 0.0, 0.0, Complex{}};
        detail::gk61_panel(f, p.a, p.b, p.val, p.err, p.resabs);
        heap.push_back(p);
    }
    std::make_heap(heap.begin(), heap.end());

    int panels = static_cast<int>(heap.size());
    const double eps = std::numeric_limits<double>::epsilon();
    const double min_width = 64.0 * eps * std::max(std::abs(a), std::abs(b));
    auto resync = [&heap](Complex& v, double& e, double& ra) {
        v = Complex{};
        e = 0.0;
        ra = 0.0;
        for (const auto& p : heap) {
            v += p.val;
            e += p.err;
            ra += p.resabs;
        }
    };

    Complex total;
    double err, resabs;
    resync(total, err, resabs);
    int since_sync = 0;

    // the error estimates themselves bottom out around eps * int |f|; once
    // they are down there, further refinement cannot prove anything more
    auto accept = [&](double e, double ra, double tol) {
        return e <= std::max(tol, 100.0 * eps * ra);
    };

    while (true) {
        const double tol = std::max(qs.abs_tol, qs.rel_tol * std::abs(total));
        if (accept(err, resabs, tol)) {
            resync(total, err, resabs);
            return {total, err, panels,
                    accept(err, resabs, std::max(qs.abs_tol, qs.rel_tol * std::abs(total)))};
        }
        if (panels >= qs.max_subdivisions) {
            resync(total, err, resabs);
            return {total, err, panels, false};
        }
        std::pop_heap(heap.begin(), heap.end());
        Panel worst = heap.back();
        heap.pop_back();
        if (worst.b - worst.a <= min_width) {
            // cannot refine further
            heap.push_back(worst);
            std::push_heap(heap.begin(), heap.end());
            resync(total, err, resabs);
            return {total, err, panels, accept(err, resabs, tol)};
        }
        const double mid = 0.5 * (worst.a + worst.b);
        Panel left{worst.a, mid, 0.0, 0.0, Complex{}};
        Panel right{mid, worst.b, 0.0, 0.0, Complex{}};
        detail::gk61_panel(f, left.a, left.b, left.val, left.err, left.resabs);
        detail::gk61_panel(f, right.a, right.b, right.val, right.err, right.resabs);
        total += left.val + right.val - worst.val;
        err += left.err + right.err - worst.err;
        resabs += left.resabs + right.resabs - worst.resabs;
        heap.push_back(left);
        std::push_heap(heap.begin(), heap.end());
        heap.push_back(right);
        std::push_heap(heap.begin(), heap.end());
        ++panels;
        if (++since_sync >= 512) {
            resync(total, err, resabs);
            since_sync = 0;
        }
        err = std::max(err, 0.0);
    }
}

// Composite Simpson weights for n uniformly spaced samples (n >= 2). Uses a
// 3/8 block at the end when the panel count is odd.
inline std::vector<double> simpson_weights(int n, double dx) {
    if (n < 2) throw std::invalid_argument("simpson_weights: need at least 2 samples");
    std::vector<double> w(static_cast<size_t>(n), 0.0);
    if (n == 2) {
        w[0] = w[1] = 0.5 * dx;
        return w;
    }
    int panels = n - 1;
    int simpson_end = n - 1;     // last index covered by plain Simpson pairs
    bool tail38 = false;
    if (panels % 2 != 0) {
        if (n >= 4) {
            simpson_end = n - 4;  // leave 3 panels for the 3/8 rule
            tail38 = true;
        } else {
            // n == 3 cannot happen here (2 panels is even); defensive
            simpson_end = n - 1;
        }
    }
    for (int i = 0; i + 2 <= simpson_end; i += 2) {
        w[i] += dx / 3.0;
        w[i + 1] += 4.0 * dx / 3.0;
        w[i + 2] += dx / 3.0;
    }
    if (tail38) {
        const int i = n - 4;
        w[i] += 3.0 * dx / 8.0;
        w[i + 1] += 9.0 * dx / 8.0;
        w[i + 2] += 9.0 * dx / 8.0;
        w[i + 3] += 3.0 * dx / 8.0;
    }
    return w;
}

template <class T>
T composite_simpson(const std::vector<T>& v, double dx) {
    const auto w = simpson_weights(static_cast<int>(v.size()), dx);
    T sum{};
    for (size_t i = 0; i < v.size(); ++i) sum += w[i] * v[i];
    return sum;
}

}  // namespace dit
