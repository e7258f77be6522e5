"""Regenerate the synthetic household power fixture shipped with the package.

Same column layout, delimiter and ``?`` missing-row convention as the UCI
"Individual household electric power consumption" file, 7000 minute rows.
"""

import datetime as dt
import sys

import numpy as np

N_ROWS = 7000
HEADER = (
    "Date;Time;Global_active_power;Global_reactive_power;Voltage;"
    "Global_intensity;Sub_metering_1;Sub_metering_2;Sub_metering_3"
)


def main(path):
    rng = np.random.Generator(np.random.PCG64(20061216))
    t = np.arange(N_ROWS)
    noise = np.zeros(N_ROWS)
    for k in range(1, N_ROWS):
        noise[k] = 0.9 * noise[k - 1] + rng.normal(0.0, 0.03)
    power = 1.4 + 0.8 * np.sin(2 * np.pi * t / 240) + 0.35 * np.sin(2 * np.pi * t / 37 + 1.0) + noise
    power = np.clip(power, 0.08, None)
    reactive = 0.1 + 0.05 * np.abs(np.sin(2 * np.pi * t / 90)) + rng.normal(0, 0.005, N_ROWS)
    voltage = 240 - 2.0 * (power - 1.4) + rng.normal(0, 0.5, N_ROWS)
    missing = rng.random(N_ROWS) < 0.01
    missing[0] = False
    start = dt.datetime(2006, 12, 16, 17, 24)
    with open(path, "w") as fh:
        fh.write(HEADER + "\n")
        for k in range(N_ROWS):
            when = start + dt.timedelta(minutes=int(k))
            stamp = f"{when.day}/{when.month}/{when.year};{when:%H:%M:%S}"
            if missing[k]:
                fh.write(stamp + ";?;?;?;?;?;?;?\n")
                continue
            intensity = power[k] * 1000 / voltage[k]
            fh.write(
                f"{stamp};{power[k]:.3f};{abs(reactive[k]):.3f};{voltage[k]:.2f};"
                f"{intensity:.1f};0.000;{k % 3:.3f};{17.0 if power[k] > 1.8 else 0.0:.3f}\n"
            )


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "src/alstm/data/household_power_fixture.csv")
