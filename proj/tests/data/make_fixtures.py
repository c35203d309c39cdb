#!/usr/bin/env python3
"""Writes the WAV fixtures used by the audio tests (standard library only)."""
import math
import os
import struct
import wave

HERE = os.path.dirname(os.path.abspath(__file__))


def write(name, channels, rate, frames):
    with wave.open(os.path.join(HERE, name), "wb") as w:
        w.setnchannels(channels)
        w.setsampwidth(2)
        w.setframerate(rate)
        w.writeframes(b"".join(struct.pack("<" + "h" * channels, *f) for f in frames))


# 0.1 s full-scale 440 Hz sine at 44.1 kHz, int16 = round(32767 sin(.))
write("sine440_44k1.wav", 1, 44100,
      [(round(32767 * math.sin(2 * math.pi * 440 * n / 44100)),) for n in range(4410)])
# stereo, left +0.5 and right -0.5 full scale
write("stereo_cancel.wav", 2, 16000, [(16384, -16384)] * 1600)

