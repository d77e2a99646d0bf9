// Copyright The knoxsim Authors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#include "knoxsim/secure_boot.h"

#include <gtest/gtest.h>

#include "knoxsim/device.h"
#include "test_support.h"

namespace knoxsim {
namespace {

using testing::Profile;

TEST(ProfileTest, BundledProfilesValidate) {
  for (const char* id : {"s3_knox1", "s4_knox1", "note3_knox23", "hardened"}) {
    DeviceProfile p = Profile(id);
    EXPECT_TRUE(ValidateProfile(p).ok()) << id;
    EXPECT_EQ(p.id, id);
  }
}

TEST(ProfileTest, VersionInvariants) {
  DeviceProfile p = Profile("s4_knox1");
  p.adb_enabled = false;
  EXPECT_EQ(ValidateProfile(p).error(), ProfileError::kVersionInvariant);
  p = Profile("note3_knox23");
  p.separate_cert_store = false;
  EXPECT_EQ(ValidateProfile(p).error(), ProfileError::kVersionInvariant);
  p = Profile("note3_knox23");
  p.separate_keyboard = false;
  EXPECT_EQ(ValidateProfile(p).error(), ProfileError::kVersionInvariant);
}

TEST(ProfileTest, DerivedFieldsMustMatch) {
  DeviceProfile p = Profile("s4_knox1");
  p.firmware_hashes[1][0] ^= 1;
  EXPECT_EQ(ValidateProfile(p).error(), ProfileError::kFirmwareHashMismatch);
  p = Profile("s4_knox1");
  p.device_id = "IMEI:000000000000000";
  EXPECT_EQ(ValidateProfile(p).error(), ProfileError::kAttestationKeyMismatch);
  p = Profile("s4_knox1");
  p.critical_blocks = {p.system_block_count};
  EXPECT_EQ(ValidateProfile(p).error(), ProfileError::kBadBlockSet);
}

TEST(FirmwareTest, VendorImageSignedRootedImageNot) {
  FirmwareImage stock = MakeVendorFirmware("GT-I9505", 8);
  EXPECT_TRUE(stock.FullyVendorSigned());
  FirmwareImage rooted = MakeRootedFirmware("GT-I9505", 8);
  EXPECT_FALSE(rooted.FullyVendorSigned());
  EXPECT_FALSE(rooted.VendorSigned(BootComponentId::kKernel));
  EXPECT_TRUE(rooted.VendorSigned(BootComponentId::kSecondaryBootloader));
}

TEST(BootTest, CleanDeviceBootsWithMeasurements) {
  DeviceState d = CreateDevice(Profile("s4_knox1"), 1);
  EXPECT_EQ(d.power, PowerState::kBooted);
  EXPECT_FALSE(d.efuse.warranty_bit());
  EXPECT_EQ(d.measurement_log.entries, GoldenMeasurements(d.profile));
  EXPECT_TRUE(d.measurement_log.verify_failures.empty());
  EXPECT_NE(d.processes.Find("zygote"), nullptr);
  EXPECT_NE(d.processes.Find("vold"), nullptr);
  EXPECT_NE(d.processes.Find("adbd"), nullptr);
}

TEST(BootTest, FlashRequiresPowerOff) {
  DeviceState d = CreateDevice(Profile("s4_knox1"), 1);
  EXPECT_EQ(FlashFirmware(d, MakeRootedFirmware("GT-I9505", 8)).error(),
            BootError::kNotPoweredOff);
  EXPECT_FALSE(d.efuse.warranty_bit());
}

TEST(BootTest, UnsignedFlashSetsFuseAndBootsWithoutDmVerity) {
  DeviceState d = CreateDevice(Profile("s3_knox1"), 1);
  PowerOff(d);
  ASSERT_TRUE(FlashFirmware(d, MakeRootedFirmware(d.profile.model, 8)).ok());
  EXPECT_TRUE(d.efuse.warranty_bit());
  EXPECT_EQ(*BootDevice(d), BootOutcome::kBooted);
  ASSERT_EQ(d.measurement_log.verify_failures.size(), 1u);
  EXPECT_EQ(d.measurement_log.verify_failures[0], BootComponentId::kKernel);
}

TEST(BootTest, ReflashingStockNeverClearsFuse) {
  DeviceState d = CreateDevice(Profile("s3_knox1"), 1);
  PowerOff(d);
  ASSERT_TRUE(FlashFirmware(d, MakeRootedFirmware(d.profile.model, 8)).ok());
  ASSERT_TRUE(FlashFirmware(d, MakeVendorFirmware(d.profile.model, 8)).ok());
  EXPECT_EQ(*BootDevice(d), BootOutcome::kBooted);
  EXPECT_TRUE(d.efuse.warranty_bit());
  EXPECT_TRUE(d.measurement_log.verify_failures.empty());
}

TEST(DmVerityTest, TamperedCriticalBlockBootLoopsUntilReflash) {
  DeviceState d = CreateDevice(Profile("hardened"), 1);
  d.block_store.Tamper(*d.profile.critical_blocks.begin(), Bytes(64, 0x42));
  EXPECT_EQ(Reboot(d), BootOutcome::kBootLoop);
  EXPECT_EQ(d.power, PowerState::kBootLoop);
  EXPECT_FALSE(d.efuse.warranty_bit());
  EXPECT_TRUE(d.processes.all().empty());
  PowerOff(d);
  ASSERT_TRUE(FlashFirmware(d, MakeVendorFirmware(d.profile.model, d.profile.system_block_count)).ok());
  EXPECT_EQ(*BootDevice(d), BootOutcome::kBooted);
  EXPECT_FALSE(d.efuse.warranty_bit());
}

TEST(DmVerityTest, RootedImageBootLoopsHardenedDevice) {
  DeviceState d = CreateDevice(Profile("hardened"), 1);
  PowerOff(d);
  ASSERT_TRUE(FlashFirmware(d, MakeRootedFirmware(d.profile.model, d.profile.system_block_count)).ok());
  EXPECT_EQ(*BootDevice(d), BootOutcome::kBootLoop);
  EXPECT_TRUE(d.block_store.corrupt().contains(0));
}

TEST(BootTest, UnsignedSecureWorldOsRecordsFailure) {
  DeviceState d = CreateDevice(Profile("s4_knox1"), 1);
  PowerOff(d);
  FirmwareImage image = MakeVendorFirmware(d.profile.model, 8);
  image.components[static_cast<size_t>(BootComponentId::kSecureWorldOs)].content.push_back(0);
  ASSERT_TRUE(FlashFirmware(d, image).ok());
  EXPECT_EQ(*BootDevice(d), BootOutcome::kBooted);
  EXPECT_EQ(d.measurement_log.entries.size(), 3u);
  ASSERT_EQ(d.measurement_log.verify_failures.size(), 1u);
  EXPECT_EQ(d.measurement_log.verify_failures[0], BootComponentId::kSecureWorldOs);
  EXPECT_TRUE(d.efuse.warranty_bit());
}

TEST(PowerTest, PowerOffIsIdempotentAndKeepsFuse) {
  DeviceState d = CreateDevice(Profile("s4_knox1"), 1);
  d.efuse.Blow();
  PowerOff(d);
  size_t trace = d.trace.size();
  PowerOff(d);
  EXPECT_EQ(d.trace.size(), trace);
  EXPECT_TRUE(d.efuse.warranty_bit());
}

TEST(DmVerityTest, NonCriticalTamperIsUnreadable) {
  DeviceState d = CreateDevice(Profile("hardened"), 1);
  const int block = d.profile.system_block_count - 1;
  ASSERT_FALSE(d.profile.critical_blocks.contains(block));
  Bytes good = *DmVerityRead(d, block);
  d.block_store.Tamper(block, Bytes(64, 0xee));
  EXPECT_EQ(DmVerityRead(d, block).error(), BootError::kCorruptBlock);
  EXPECT_EQ(Reboot(d), BootOutcome::kBooted);
  EXPECT_EQ(DmVerityRead(d, block).error(), BootError::kCorruptBlock);
  EXPECT_EQ(DmVerityRead(d, 999).error(), BootError::kNoSuchBlock);
  EXPECT_EQ(good.size(), 64u);
}

TEST(DmVerityTest, DisabledReadsRawBytes) {
  DeviceState d = CreateDevice(Profile("s4_knox1"), 1);
  d.block_store.Tamper(2, Bytes(64, 0xee));
  EXPECT_EQ(*DmVerityRead(d, 2), Bytes(64, 0xee));
}

TEST(PowerTest, PowerOffDropsVolatileState) {
  DeviceState d = CreateDevice(Profile("s4_knox1"), 1);
  ASSERT_TRUE(ContainerCreate(d, "hunter77").ok());
  ASSERT_TRUE(ContainerLogin(d, "hunter77").ok());
  ASSERT_FALSE(d.mounts.empty());
  PowerOff(d);
  EXPECT_EQ(d.power, PowerState::kOff);
  EXPECT_TRUE(d.mounts.empty());
  EXPECT_TRUE(d.processes.all().empty());
  EXPECT_TRUE(d.exposure.VisibleToRoot().empty());
  EXPECT_FALSE(d.exposure.entries().empty());
  EXPECT_EQ(DmVerityRead(d, 0).error(), BootError::kNotBooted);
}

// The fuse is one-way across any sequence of power, flash and boot events.
TEST(EFuseTest, RandomSequencesNeverClearFuse) {
  DeterministicRng rng(31);
  for (int run = 0; run < 20; ++run) {
    DeviceState d = CreateDevice(Profile(run % 2 ? "s3_knox1" : "hardened"), run);
    bool seen = false;
    for (int op = 0; op < 50; ++op) {
      switch (rng.Uniform(5)) {
        case 0:
          PowerOff(d);
          break;
        case 1:
          (void)FlashFirmware(d, rng.Uniform(2) ? MakeRootedFirmware(d.profile.model, 8)
                                                : MakeVendorFirmware(d.profile.model, 8));
          break;
        case 2:
          (void)BootDevice(d);
          break;
        case 3:
          if (d.power == PowerState::kBooted) Reboot(d);
          break;
        case 4:
          d.block_store.Tamper(static_cast<int>(rng.Uniform(8)), rng.NextBytes(64));
          break;
      }
      if (seen) {
        ASSERT_TRUE(d.efuse.warranty_bit());
      }
      seen = d.efuse.warranty_bit();
    }
  }
}

}  // namespace
}  // namespace knoxsim
