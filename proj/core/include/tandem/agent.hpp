#pragma once

#include "tandem/geometry.hpp"

#include <string>

namespace tandem {

enum class SensorKind { FrustumCamera, Lidar360 };

/// Range sensor geometry: max range, horizontal/vertical field of view and
/// the ray raster used when simulating scans.
struct SensorModel {
  SensorKind kind = SensorKind::FrustumCamera;
  double maxRange = 10.0;
  double fovH = kPi / 2.0;
  double fovV = 2.0 * kPi / 5.0;
  int raysH = 64;
  int raysV = 48;

  /// Forward-facing depth camera: 10 m range, 90 x 72 deg FOV.
  static SensorModel depthCamera() { return SensorModel{}; }

  /// Spinning 3D lidar: 6 m range, full azimuth, +/-20 deg vertical FOV.
  static SensorModel lidar360() {
    return SensorModel{SensorKind::Lidar360, 6.0, 2.0 * kPi, 40.0 * kPi / 180.0, 360, 16};
  }
};

enum class MotionType { Ground, Aerial };

/// One agent of the team: motion class, sensor, and collision geometry.
/// Ground agents carry a fixed sensor height; their pose z always equals it.
struct AgentSpec {
  std::string name;
  MotionType motion = MotionType::Aerial;
  SensorModel sensor;
  Vec3 collisionHalfExtents = Vec3::Constant(0.4);
  double sensorHeight = 0.0;

  static AgentSpec defaultUav() {
    AgentSpec a;
    a.name = "uav";
    a.motion = MotionType::Aerial;
    a.sensor = SensorModel::depthCamera();
    a.collisionHalfExtents = Vec3::Constant(0.4);
    return a;
  }

  static AgentSpec defaultUgv() {
    AgentSpec a;
    a.name = "ugv";
    a.motion = MotionType::Ground;
    a.sensor = SensorModel::lidar360();
    a.collisionHalfExtents = Vec3(0.5, 0.5, 0.35);
    a.sensorHeight = 0.75;
    return a;
  }
};

/// Continuous agent configuration.
struct Viewpoint {
  Vec3 position = Vec3::Zero();
  double yaw = 0.0;
};

}  // namespace tandem
