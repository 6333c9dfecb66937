#include "medpower/rng.hpp"

#include "medpower/normal.hpp"

namespace medpower {

double Rng::next_normal(double mean) {
    return mean + normal_quantile(next_unit());
}

}  // namespace medpower
