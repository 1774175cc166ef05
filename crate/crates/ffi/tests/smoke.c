/* Links against the static library and exercises every entry point once. */
#include <math.h>
#include <stdio.h>
#include <string.h>

#include "pdem.h"

#define CHECK(cond)                                                   \
  do {                                                                \
    if (!(cond)) {                                                    \
      fprintf(stderr, "%s:%d: %s (%s)\n", __FILE__, __LINE__, #cond,  \
              pdem_last_error_message());                             \
      return 1;                                                       \
    }                                                                 \
  } while (0)

int main(void) {
  PdemDevice *dev = NULL;
  CHECK(pdem_device_new(1.5, 4.0, 0.3, 2.5, &dev) == PDEM_STATUS_OK);

  double v0 = 0.0;
  CHECK(pdem_threshold(dev, &v0) == PDEM_STATUS_OK);
  CHECK(fabs(v0 + 4.0 / 7.25) < 1e-12);

  PdemScatter left, right;
  CHECK(pdem_scatter(dev, 44.0, PDEM_SIDE_LEFT, PDEM_METHOD_ANALYTIC, &left) == PDEM_STATUS_OK);
  CHECK(pdem_scatter(dev, 44.0, PDEM_SIDE_RIGHT, PDEM_METHOD_ANALYTIC, &right) == PDEM_STATUS_OK);
  CHECK(fabs(left.t.re - right.t.re) < 1e-10 && fabs(left.t.im - right.t.im) < 1e-10);
  CHECK(pdem_scatter(dev, -3.0, PDEM_SIDE_LEFT, PDEM_METHOD_ANALYTIC, &left) == PDEM_STATUS_BELOW_THRESHOLD);
  CHECK(strlen(pdem_last_error_message()) > 0);

  size_t count = 0;
  double levels[8];
  CHECK(pdem_bound_states(dev, levels, 8, &count) == PDEM_STATUS_OK);
  CHECK(count == 2 && levels[0] < levels[1] && levels[1] < v0);

  PdemComplex v;
  double m;
  CHECK(pdem_potential(dev, 1.0, &v) == PDEM_STATUS_OK);
  CHECK(pdem_mass(dev, 0.0, &m) == PDEM_STATUS_OK);
  CHECK(fabs(v.re + 2.0) < 1e-14 && fabs(m - 1.125) < 1e-14);

  PdemComplex one = {1.0, 0.0}, half = {0.5, 0.0}, f;
  /* 2F1(1, 1; 2; y) = -ln(1 - y) / y */
  PdemComplex two = {2.0, 0.0};
  CHECK(pdem_hyp2f1(one, one, two, half, &f) == PDEM_STATUS_OK);
  CHECK(fabs(f.re - 2.0 * log(2.0)) < 1e-14 && f.im == 0.0);

  PdemDevice *bad = NULL;
  CHECK(pdem_device_new(-1.0, 4.0, 0.3, 2.5, &bad) == PDEM_STATUS_INVALID_ARGUMENT && bad == NULL);
  pdem_device_free(bad);
  pdem_device_free(dev);
  printf("ok\n");
  return 0;
}
