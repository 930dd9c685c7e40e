#pragma once

namespace memfem {

/// Inflation of an incompressible Neo-Hooke spherical membrane:
/// p R / (mu T) as a function of the volume ratio V/V0.
double balloon_pressure(double volume_ratio);

/// Volume ratio at which balloon_pressure attains its maximum, and the value
/// there.
double balloon_peak_volume_ratio();
double balloon_peak_pressure();

/// Constant-surface-tension droplet: p R / gamma as a function of V/V0
/// (R is the initial radius).
double droplet_pressure(double volume_ratio);

}  // namespace memfem
