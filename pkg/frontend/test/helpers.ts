import { execFile, spawn, type ChildProcess } from 'node:child_process';
import { mkdtemp, rm } from 'node:fs/promises';
import { tmpdir } from 'node:os';
import { dirname, join } from 'node:path';
import { fileURLToPath } from 'node:url';
import { promisify } from 'node:util';

const execFileAsync = promisify(execFile);

export const TEST_DIR = dirname(fileURLToPath(import.meta.url));
export const REPO_ROOT = join(TEST_DIR, '..', '..');

export async function makeTempDir(prefix: string): Promise<string> {
  return mkdtemp(join(tmpdir(), prefix));
}

export async function removeDir(dir: string): Promise<void> {
  await rm(dir, { recursive: true, force: true });
}

/** Run a newsbitext CLI subcommand; throws with stderr on failure. */
export async function runCli(args: string[], cwd?: string): Promise<string> {
  const { stdout } = await execFileAsync('python3', ['-m', 'newsbitext.cli', ...args], {
    cwd,
    maxBuffer: 16 * 1024 * 1024,
  });
  return stdout;
}

export async function runPython(args: string[], cwd?: string): Promise<string> {
  const { stdout } = await execFileAsync('python3', args, { cwd });
  return stdout;
}

export interface RunningService {
  baseUrl: string;
  stop: () => Promise<void>;
}

/**
 * Spawn the real annotation service over the given data directory and
 * wait until it answers /schema. The caller must stop() it.
 */
export async function startService(dataDir: string): Promise<RunningService> {
  const port = 18000 + Math.floor(Math.random() * 10000);
  const baseUrl = `http://127.0.0.1:${port}`;
  const child: ChildProcess = spawn(
    'python3',
    ['-m', 'newsbitext.cli', 'serve', '--data', dataDir, '--port', String(port)],
    { stdio: ['ignore', 'pipe', 'pipe'] },
  );
  let output = '';
  child.stdout?.on('data', (chunk: Buffer) => {
    output += chunk.toString();
  });
  child.stderr?.on('data', (chunk: Buffer) => {
    output += chunk.toString();
  });
  let exited = false;
  child.on('exit', () => {
    exited = true;
  });

  const deadline = Date.now() + 30_000;
  for (;;) {
    if (exited) {
      throw new Error(`service exited during startup:\n${output}`);
    }
    try {
      const response = await fetch(`${baseUrl}/schema`);
      if (response.ok) {
        break;
      }
    } catch {
      // not listening yet
    }
    if (Date.now() > deadline) {
      child.kill();
      throw new Error(`service did not come up on ${baseUrl}:\n${output}`);
    }
    await new Promise((resolve) => setTimeout(resolve, 150));
  }

  return {
    baseUrl,
    stop: () =>
      new Promise<void>((resolve) => {
        if (exited) {
          resolve();
          return;
        }
        child.once('exit', () => resolve());
        child.kill();
        setTimeout(() => {
          child.kill('SIGKILL');
          resolve();
        }, 5_000).unref();
      }),
  };
}
