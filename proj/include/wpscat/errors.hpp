#pragma once

#include <stdexcept>
#include <string>

namespace wpscat {

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// grid_core
struct NonPowerOfTwo : Error { using Error::Error; };
struct UnsupportedDim : Error { using Error::Error; };
struct NonPositiveExtent : Error { using Error::Error; };
struct GridMismatch : Error { using Error::Error; };

// wavepacket
struct ZeroWindow : Error { using Error::Error; };
struct BadBand : Error { using Error::Error; };
struct UnsupportedOrder : Error { using Error::Error; };

// dynamics
struct StepUnderflow : Error { using Error::Error; };

// phase_regions
struct DimMismatch : Error { using Error::Error; };
struct ShearOutOfDomain : Error { using Error::Error; };

// scattering_lab
struct NotCauchy : Error { using Error::Error; };
struct LowFrequencyMass : Error { using Error::Error; };
struct ZeroState : Error { using Error::Error; };
struct WindowBandViolation : Error { using Error::Error; };
struct BadSpectralSupport : Error { using Error::Error; };
struct NoBoundState : Error { using Error::Error; };

// cli_runner
struct ConfigInvalid : Error { using Error::Error; };
struct ResourceLimit : Error { using Error::Error; };
struct IoFailure : Error { using Error::Error; };

} // namespace wpscat
