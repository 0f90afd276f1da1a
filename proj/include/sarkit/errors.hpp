#pragma once

#include <stdexcept>
#include <string>

namespace sarkit {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Raster / kernel errors
struct InvalidKernel : Error { using Error::Error; };
struct DegenerateImage : Error { using Error::Error; };
struct ShapeMismatch : Error { using Error::Error; };
struct InvalidSize : Error { using Error::Error; };

// Segmentation / labeling
struct EmptySegmentation : Error { using Error::Error; };
struct NoTarget : Error { using Error::Error; };

// Scene synthesis
struct PlacementExhausted : Error { using Error::Error; };
struct PlanSceneMismatch : Error { using Error::Error; };

// Slicing / detection post-processing
struct InvalidStride : Error { using Error::Error; };
struct UnknownSlice : Error { using Error::Error; };
struct DegenerateBox : Error { using Error::Error; };

// Feature statistics
struct TooFewSamples : Error { using Error::Error; };
struct NotSymmetric : Error { using Error::Error; };
struct NotPSD : Error { using Error::Error; };
struct DimensionMismatch : Error { using Error::Error; };

// File handling
struct IoError : Error { using Error::Error; };
struct ParseError : Error { using Error::Error; };

}  // namespace sarkit
