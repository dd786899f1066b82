#include "locomanip/contact.hpp"

#include "locomanip/errors.hpp"

namespace locomanip {

void ContactModel::validate() const {
  if (!(k_env >= 0.0)) throw InvalidConfig("k_env must be nonnegative");
  for (std::size_t i = 1; i < disturbance.size(); ++i) {
    if (!(disturbance[i].t_start > disturbance[i - 1].t_start)) {
      throw InvalidConfig("disturbance schedule times must be strictly increasing");
    }
  }
}

double ContactModel::disturbance_at(double t) const {
  double value = 0.0;
  for (const auto& step : disturbance) {
    if (step.t_start <= t) {
      value = step.value;
    } else {
      break;
    }
  }
  return value;
}

double measured_wrench(const ContactModel& contact, double x, double t) {
  return contact.spring(x) + contact.disturbance_at(t);
}

}  // namespace locomanip
