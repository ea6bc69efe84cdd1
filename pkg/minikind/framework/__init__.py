from minikind.framework.bus import MessageBus
