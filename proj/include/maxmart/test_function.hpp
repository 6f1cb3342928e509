#ifndef MAXMART_TEST_FUNCTION_HPP_
#define MAXMART_TEST_FUNCTION_HPP_

#include <functional>
#include <stdexcept>
#include <vector>

namespace maxmart {

// Bounded scalar test function with exact integration support for the
// kernels used by the conditional-law-of-supremum machinery:
//   F(x)      = int_0^x f(y) dy
//   tail_k(s) = int_s^infty f(y)/y^2 dy            (s > 0)
//   h(x)      = int_x^infty (f(y) - f(x))/y^2 dy   (x > 0)
//   comp(t)   = int_0^t (1 - exp(-f(s))) ds        (Poisson compensator)
// Indicator / constant / piecewise-linear kinds integrate in closed form;
// generic callables fall back to adaptive Simpson quadrature (rel tol 1e-8).
class TestFunction {
  public:
    enum class Kind { Indicator, Constant, PiecewiseLinear, Generic };

    static TestFunction indicator(double a);             // f(y) = 1_{y > a}
    static TestFunction constant(double c);
    // Knots (x_k, y_k), x strictly increasing; f is linear between knots and
    // constant outside the knot range.
    static TestFunction piecewise_linear(std::vector<double> xs, std::vector<double> ys);
    static TestFunction generic(std::function<double(double)> f);

    Kind kind() const { return kind_; }
    double indicator_level() const { return a_; }

    double value(double x) const;
    double primitive(double x) const;           // F(x), F(0) = 0
    double reciprocal_tail(double s) const;     // int_s^inf f/y^2
    double h(double x) const;                   // the h_f transform
    double exp_compensator(double t) const;     // int_0^t (1 - e^{-f})

  private:
    TestFunction() = default;
    Kind kind_ = Kind::Constant;
    double a_ = 0.0;  // indicator level or constant value
    std::vector<double> xs_, ys_;
    std::function<double(double)> fn_;
};

}  // namespace maxmart

#endif  // MAXMART_TEST_FUNCTION_HPP_
