#ifndef SHAPEPOSE_ERROR_H_
#define SHAPEPOSE_ERROR_H_

#include <stdexcept>
#include <string>

namespace shapepose {

// Base class for all library errors. Invalid arguments that violate a
// documented precondition throw std::invalid_argument instead.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Rendering produced no foreground pixel inside the image.
class EmptyMaskError : public Error {
 public:
  using Error::Error;
};

// A contour with too few points to define a polar signature.
class DegenerateContourError : public Error {
 public:
  using Error::Error;
};

// A polar signature without variance; correlation is undefined.
class ConstantSignatureError : public Error {
 public:
  using Error::Error;
};

// The scene generator could not keep the object inside both cameras.
class FrustumError : public Error {
 public:
  using Error::Error;
};

// Malformed or unreadable file.
class FormatError : public Error {
 public:
  using Error::Error;
};

// A label map without any segment large enough to analyse.
class NoSegmentError : public Error {
 public:
  using Error::Error;
};

// A class id that the manifest does not list.
class UnknownClassError : public Error {
 public:
  using Error::Error;
};

}  // namespace shapepose

#endif  // SHAPEPOSE_ERROR_H_
