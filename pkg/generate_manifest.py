import argparse
import os

from homext.modcat import Ring

from cli.manifest import Manifest
from cli.verify import PROPS, fuzz_instance, lookup

# Make sure the manifest directory exists
if not os.path.exists('manifests'):
    os.makedirs('manifests')

parser = argparse.ArgumentParser()
parser.add_argument('prop', type=str, choices=sorted(PROPS),
                    help='Proposition whose instance generator is used')
parser.add_argument('--seed', type=int, default=0, help='Seed of the run')
parser.add_argument('--index', type=int, default=0, help='Index of the instance within the run')
parser.add_argument('--ring', type=int, default=None,
                    help='Modulus N (drawn from the fuzzing moduli by default)')
parser.add_argument('--output_file', type=str, default=None, help='Output file')
args = parser.parse_args()

if args.output_file:
    output_file_name = args.output_file
else:
    output_file_name = 'manifests/{}_{}_{}.json'.format(args.prop, args.seed, args.index)

prop = lookup(args.prop)
ring, instance = fuzz_instance(prop, args.seed, args.index, Ring(args.ring) if args.ring else None)

print("Generated instance {} of seed {} for {} over Z/{}".format(
    args.index, args.seed, prop.id, ring.N))
print("Saving manifest to {}".format(output_file_name))

Manifest(ring, instance).save(output_file_name)
